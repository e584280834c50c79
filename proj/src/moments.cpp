#include "momentlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "momentlab/gammafun.hpp"
#include "momentlab/momentseries.hpp"
#include "momentlab/trace.hpp"

namespace momentlab::moments {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx cpow(double base, cplx e) { return std::exp(e * std::log(base)); }

// i^{2k}
cplx quarter_phase(int k) {
  return (k % 2 == 0) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
}

void check_common(int64 l, int k, const arith::Level& level) {
  if (l < 1) throw std::domain_error("moments: l must be >= 1");
  if (k < 2)
    throw std::domain_error("moments: k must be >= 2 (k = 1 is out of scope)");
  if (level.nu < 2)
    throw std::domain_error("moments: level must be p^nu with nu >= 2");
  const arith::Level checked = arith::make_level(level.p, level.nu);
  if (checked.N != level.N)
    throw std::domain_error("moments: level.N is not p^nu");
}

momentseries::ShiftedParams shifted(int64 l, cplx u, double t, int k,
                                    const arith::Level& level) {
  momentseries::ShiftedParams sp;
  sp.l = l;
  sp.u = u;
  sp.t = t;
  sp.k = k;
  sp.level = level;
  return sp;
}

}  // namespace

double v_estimate(int64 l, double t, int k, const arith::Level& level) {
  if (l < 1) throw std::domain_error("v_estimate: l must be >= 1");
  if (k < 1) throw std::domain_error("v_estimate: k must be >= 1");
  const arith::Level checked = arith::make_level(level.p, level.nu);
  if (checked.N != level.N)
    throw std::domain_error("v_estimate: level.N is not p^nu");

  constexpr double kEps = 0.01;
  const double T = 1.0 + std::abs(t);
  const double N = double(level.N);
  const double d0 = kTwoPi * std::numbers::e * double(l) * T / (N * double(k));
  if (d0 >= 1.0) {
    const double osc =
        std::max(std::sqrt(T) / double(k), 1.0 / std::sqrt(double(k)));
    return std::sqrt(double(l)) * std::pow(double(l) * T, kEps) / N * osc;
  }
  // below the transition the kernel decay wins a full power of (d0/2) per
  // unit of weight
  return std::pow(0.5 * d0, double(k)) / std::sqrt(double(l) * T);
}

MomentResult m1_explicit(int64 l, double t, int k, const arith::Level& level,
                         double tail_target) {
  check_common(l, k, level);
  if (!(tail_target > 0.0) || !std::isfinite(tail_target))
    throw std::domain_error("m1_explicit: tail_target must be positive");

  MomentResult out;
  if (l % level.p == 0) return out;  // the sieved average kills p | l

  const int64 p = level.p;
  const double wt = arith::sieve_weight(level).to_double();
  const cplx sgn = quarter_phase(k);
  const arith::Level lower = arith::make_level(p, level.nu - 1);

  out.main_term = arith::phi_nu(level).to_double() * cpow(double(l), cplx(-0.5, -t));

  // Envelope of the kernel corrections with implied constant 1.  It doubles
  // as the floor scale for the internal tail targets: at u = 0 the continued
  // series cannot certify arbitrarily tight remainders, so targets far below
  // the correction's own magnitude only burn time without tightening the
  // result.  The price actually paid is reported either way.
  double combo = v_estimate(l, t, k, level) +
                 v_estimate(l, t, k, lower) / double(p);
  if (level.nu == 2)
    combo += 1.0 / (std::sqrt(double(l)) * double(p) * double(p));
  const double floor_scale = std::max(3.0e-3 * combo, 1.0e-10);

  const auto sp_top = shifted(l, cplx(0.0, 0.0), t, k, level);
  const auto sp_low = shifted(l, cplx(0.0, 0.0), t, k, lower);

  double price = 0.0;
  if (level.nu >= 3) {
    // M1 = (1 - 1/p) l^{-1/2-it} + 2 pi i^{2k} (V_N - V_{N/p} / p)
    const double tt_hi = std::max(tail_target / (2.0 * kTwoPi), floor_scale);
    const double tt_lo = std::max(tail_target * double(p) / (2.0 * kTwoPi),
                                  floor_scale * double(p));
    const auto v_hi =
        momentseries::series_V(sp_top, momentseries::VForm::kernel_form, tt_hi);
    const auto v_lo =
        momentseries::series_V(sp_low, momentseries::VForm::kernel_form, tt_lo);
    out.kernel_correction = kTwoPi * sgn * (v_hi.value - v_lo.value / wt);
    price = kTwoPi * (v_hi.truncation_bound + v_lo.truncation_bound / wt);
  } else {
    // M1 = (1 - 1/w) l^{-1/2-it}
    //      + 2 pi i^{2k} [V_{p^2} - V_p / w + (p^{-1/2-it} / w) V~_p],
    // w = p - 1/p.  The polar part of V~_p is split off as the secondary
    // main term; the remainder stays with the kernel corrections.
    const double rp = std::sqrt(double(p));
    const double tt_hi = std::max(tail_target / (3.0 * kTwoPi), floor_scale);
    const double tt_lo = std::max(tail_target * wt / (3.0 * kTwoPi),
                                  floor_scale * wt);
    const double tt_tl = std::max(tail_target * wt * rp / (3.0 * kTwoPi),
                                  floor_scale * wt * rp);
    const auto v_hi =
        momentseries::series_V(sp_top, momentseries::VForm::kernel_form, tt_hi);
    const auto v_lo =
        momentseries::series_V(sp_low, momentseries::VForm::kernel_form, tt_lo);
    const auto v_tl = momentseries::series_V_tilde(sp_top, tt_tl);
    const cplx polar = momentseries::v_tilde_polar(sp_top);
    const cplx pshift = cpow(double(p), cplx(-0.5, -t));
    out.secondary_term = kTwoPi * sgn * (pshift / wt) * polar;
    out.kernel_correction =
        kTwoPi * sgn *
        (v_hi.value - v_lo.value / wt + (pshift / wt) * (v_tl.value - polar));
    price = kTwoPi * (v_hi.truncation_bound + v_lo.truncation_bound / wt +
                      v_tl.truncation_bound / (rp * wt));
  }

  out.error_envelope = combo + price;
  out.total = out.main_term + out.secondary_term + out.kernel_correction;
  return out;
}

CrossCheck m1_cross_check(int64 l, double t, int k, const arith::Level& level,
                          double u, int64 n_max) {
  check_common(l, k, level);
  if (!(u > 0.75))
    throw std::domain_error("m1_cross_check: needs u > 3/4");
  if (!(u < double(k) - 1.0))
    throw std::domain_error("m1_cross_check: needs u < k - 1");
  if (n_max < 8) throw std::domain_error("m1_cross_check: n_max too small");

  CrossCheck out;
  if (l % level.p == 0) return out;  // both routes are identically zero

  const int64 p = level.p;
  const double wt = arith::sieve_weight(level).to_double();
  const arith::Level lower = arith::make_level(p, level.nu - 1);
  const cplx sgn = quarter_phase(k);
  const cplx sig(0.5 + u, t);  // n^{-sig}

  // Direct route: sum the sieved traces n^{-1/2-u-it} Delta*(l, n) over
  // (n, p) = 1 through two batched Bessel sweeps.  The j-tails are certified
  // by the batch majorant; the n-tail beyond n_max is a measured dyadic
  // estimate (trailing half-block, ratio 2^{1/4-u}, times 10).
  const double sigma_r = 0.5 + u;
  const double jt_hi = 2.5e-7;
  const double jt_lo = 2.5e-7 * wt;
  const int64 j_cap = std::max<int64>(1024, int64(3.0e7) / n_max);
  auto pick_count = [&](const arith::Level& lev, double target) {
    int64 j = 0;
    try {
      j = trace::batched_count_for(l, k, lev, n_max, sigma_r, target);
    } catch (const std::runtime_error&) {
      j = j_cap;
    }
    return std::min(j, j_cap);
  };
  const int64 j_hi = pick_count(level, jt_hi);
  const int64 j_lo = pick_count(lower, jt_lo);
  const auto batch_hi = trace::batched_geometric(l, k, level, n_max, j_hi);
  const auto batch_lo = trace::batched_geometric(l, k, lower, n_max, j_lo);

  cplx acc(0.0, 0.0);
  cplx half(0.0, 0.0), quarter(0.0, 0.0);
  for (int64 n = 1; n <= n_max; ++n) {
    if (n % p == 0) continue;
    const cplx w = std::exp(-sig * std::log(double(n)));
    cplx term = w * kTwoPi * sgn *
                (batch_hi.csum[std::size_t(n - 1)] -
                 batch_lo.csum[std::size_t(n - 1)] / wt);
    if (n == l) term += w * (1.0 - 1.0 / wt);
    acc += term;
    if (2 * n > n_max)
      half += term;
    else if (4 * n > n_max)
      quarter += term;
  }
  out.lhs = acc;

  const double r = std::pow(2.0, 0.25 - u);
  const double n_tail = 10.0 *
                        std::max(std::abs(half), r * std::abs(quarter)) * r /
                        (1.0 - r);
  const double j_tail =
      kTwoPi *
      (trace::batched_tail_weighted(l, k, level, n_max, sigma_r, j_hi) +
       trace::batched_tail_weighted(l, k, lower, n_max, sigma_r, j_lo) / wt);
  out.lhs_bound = n_tail + j_tail;

  // Continued route: the explicit assembly at the same shift.
  const auto sp_top = shifted(l, cplx(u, 0.0), t, k, level);
  const auto sp_low = shifted(l, cplx(u, 0.0), t, k, lower);
  const double tt_hi = 1.0e-7;
  const double tt_lo = 1.0e-7 * wt;
  const auto v_hi =
      momentseries::series_V(sp_top, momentseries::VForm::kernel_form, tt_hi);
  const auto v_lo =
      momentseries::series_V(sp_low, momentseries::VForm::kernel_form, tt_lo);

  cplx rhs = arith::phi_nu(level).to_double() *
             std::exp(-sig * std::log(double(l)));
  rhs += kTwoPi * sgn * (v_hi.value - v_lo.value / wt);
  double rhs_bound =
      kTwoPi * (v_hi.truncation_bound + v_lo.truncation_bound / wt);
  if (level.nu == 2) {
    const double rp = std::sqrt(double(p));
    const auto v_tl = momentseries::series_V_tilde(
        sp_top, 1.0e-7 * wt * std::pow(double(p), sigma_r));
    const cplx pshift = std::exp(-sig * std::log(double(p)));
    rhs += kTwoPi * sgn * (pshift / wt) * v_tl.value;
    rhs_bound += kTwoPi * v_tl.truncation_bound *
                 std::pow(double(p), -sigma_r) / wt;
    (void)rp;
  }
  out.rhs = rhs;
  out.rhs_bound = rhs_bound;
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

cplx m2_main_term(int64 l, double t, int k, const arith::Level& level) {
  check_common(l, k, level);
  if (l % level.p == 0) return cplx(0.0, 0.0);

  const int64 p = level.p;
  const int64 N = level.N;
  const int64 phi_N = N - N / p;
  const double pref =
      (double(phi_N) / double(N)) * arith::phi_nu(level).to_double();

  const cplx bracket =
      std::log(double(N)) + 2.0 * gammafun::EULER_GAMMA -
      2.0 * std::log(kTwoPi) + 2.0 * std::log(double(p)) / (double(p) - 1.0) +
      gammafun::digamma(cplx(double(k), t)) +
      gammafun::digamma(cplx(double(k), -t));
  const cplx first =
      pref * (arith::tau_it(l, t) / std::sqrt(double(l))) * bracket;

  // divisor correction: l^{-1/2+it} sum_{d | l} sum_{r | d} mu(d/r)
  // tau_it(r) r^{-it} log r; empty at l = 1
  cplx dsum(0.0, 0.0);
  for (int64 d : arith::divisors(l)) {
    for (int64 rr : arith::divisors(d)) {
      const int mu = arith::moebius(d / rr);
      if (mu == 0) continue;
      dsum += double(mu) * arith::tau_it(rr, t) *
              std::exp(cplx(0.0, -t * std::log(double(rr)))) *
              std::log(double(rr));
    }
  }
  const cplx second = pref * cpow(double(l), cplx(-0.5, t)) * dsum;
  return first - second;
}

}  // namespace momentlab::moments
