#include "momentlab/zetafun.hpp"

#include <cmath>
#include <stdexcept>

#include "momentlab/arith.hpp"
#include "momentlab/gammafun.hpp"

namespace momentlab::zetafun {

namespace {

// B_{2r} / (2r)! for r = 1..12, the Euler-Maclaurin correction weights.
constexpr double kBernOverFact[12] = {
    8.3333333333333333333e-02,   // B2/2!
    -1.3888888888888888889e-03,  // B4/4!
    3.3068783068783068783e-05,
    -8.2671957671957671958e-07,
    2.0876756987868098979e-08,
    -5.2841901386874931848e-10,
    1.3382536530684678833e-11,
    -3.3896802963225828668e-13,
    8.5860620562778445641e-15,
    -2.1748686985580618730e-16,
    5.5090028283602295152e-18,
    -1.3954464685812523340e-19,
};

int choose_head_length(cplx z, double a) {
  double zn = std::abs(z);
  int m = int(std::ceil(0.9 * zn + 10.0 - std::min(a, 1.0)));
  return std::max(m, 16);
}

void check_args(cplx z, double a) {
  if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta: requires a > 0");
  if (std::abs(z - cplx(1.0, 0.0)) < 1e-12)
    throw std::domain_error("hurwitz_zeta: pole at z = 1");
}

// Euler-Maclaurin given the head length M:
//   sum_{m<M} (m+a)^{-z} + (M+a)^{1-z}/(z-1) + (M+a)^{-z}/2
//   + sum_r B_{2r}/(2r)! (z)_{2r-1} (M+a)^{-z-2r+1}.
cplx euler_maclaurin(cplx z, double a, int M) {
  cplx head(0.0, 0.0);
  for (int m = 0; m < M; ++m)
    head += std::exp(-z * std::log(double(m) + a));
  double q = double(M) + a;
  double lq = std::log(q);
  cplx qz = std::exp(-z * lq);  // q^{-z}
  cplx tail = qz * q / (z - 1.0) + 0.5 * qz;
  cplx poch(1.0, 0.0);  // (z)_{2r-1} built incrementally
  cplx qpow = qz / q;   // q^{-z-1}, then q^{-z-3}, ...
  double q2 = 1.0 / (q * q);
  for (int r = 1; r <= 12; ++r) {
    poch *= (r == 1) ? z : (z + double(2 * r - 3)) * (z + double(2 * r - 2));
    tail += kBernOverFact[r - 1] * poch * qpow;
    qpow *= q2;
  }
  return head + tail;
}

bool is_near_integer(double x, double eps = 1e-12) {
  return std::abs(x - std::round(x)) < eps;
}

// Smallest shift giving n0 + alpha > 0; the sum over all integers n with
// n + alpha > 0 then matches zeta(s, n0 + alpha) with n0 + alpha in (0, 1].
double base_offset(double alpha) {
  double a = alpha - std::floor(alpha);
  if (a == 0.0) a = 1.0;
  return a;
}

// Forward difference of order `level` of g at n, g given on integers.
template <typename G>
cplx forward_diff(const G& g, long long n, int level) {
  cplx acc(0.0, 0.0);
  double sign = (level % 2 == 0) ? 1.0 : -1.0;
  double binom = 1.0;
  for (int j = 0; j <= level; ++j) {
    acc += sign * binom * g(n + j);
    sign = -sign;
    binom = binom * double(level - j) / double(j + 1);
  }
  return acc;
}

}  // namespace

cplx hurwitz_zeta(cplx z, double a) {
  check_args(z, a);
  return euler_maclaurin(z, a, choose_head_length(z, a));
}

std::vector<cplx> hurwitz_zeta_family(cplx z0, double a, int count) {
  if (count < 1) throw std::domain_error("hurwitz_zeta_family: count >= 1");
  cplx z_last = z0 + double(count - 1);
  for (int j = 0; j < count; ++j) check_args(z0 + double(j), a);
  int M = choose_head_length(z_last, a);

  std::vector<cplx> out(count, cplx(0.0, 0.0));
  // Shared head: one complex exp per m, then real multiplications down the
  // family since (m+a)^{-z0-j} = (m+a)^{-z0} * (m+a)^{-j}.
  for (int m = 0; m < M; ++m) {
    double w = double(m) + a;
    cplx base = std::exp(-z0 * std::log(w));
    double step = 1.0 / w;
    for (int j = 0; j < count; ++j) {
      out[j] += base;
      base *= step;
    }
  }
  double q = double(M) + a;
  double lq = std::log(q);
  double q2 = 1.0 / (q * q);
  cplx qz0 = std::exp(-cplx(z0) * lq);
  for (int j = 0; j < count; ++j) {
    cplx z = z0 + double(j);
    cplx qz = qz0;
    out[j] += qz * q / (z - 1.0) + 0.5 * qz;
    cplx poch(1.0, 0.0);
    cplx qpow = qz / q;
    for (int r = 1; r <= 12; ++r) {
      poch *= (r == 1) ? z : (z + double(2 * r - 3)) * (z + double(2 * r - 2));
      out[j] += kBernOverFact[r - 1] * poch * qpow;
      qpow *= q2;
    }
    qz0 /= q;
  }
  return out;
}

cplx riemann_zeta(cplx z) { return hurwitz_zeta(z, 1.0); }

cplx lerch_zeta(double alpha, double beta, cplx s) {
  double bfrac = beta - std::floor(beta);
  if (is_near_integer(beta)) {
    // Untwisted: pure Hurwitz value (continued for any s != 1).
    return hurwitz_zeta(s, base_offset(alpha));
  }
  if (!(s.real() > 0.0))
    throw std::domain_error("lerch_zeta: needs Re s > 0 for non-integer beta");

  double a = base_offset(alpha);
  long long n0 = llround(a - alpha);  // first summand index: n0 + alpha = a
  cplx z = arith::unit_phase(bfrac);
  cplx phase0 = std::exp(cplx(0.0, gammafun::TWO_PI) * bfrac * double(n0));

  // Term n (from the shifted origin) is e((n0+n) beta) (a+n)^{-s}.
  auto gs = [&](long long n) { return std::exp(-s * std::log(a + double(n))); };

  const long long M = 48;
  cplx head(0.0, 0.0);
  for (long long n = 0; n <= M; ++n)
    head += std::exp(cplx(0.0, gammafun::TWO_PI) * (bfrac * double(n))) * gs(n);
  head *= phase0;

  // Iterated Abel summation of the tail sum_{n>M} z^n gs(n): each level
  // trades one factor z/(1-z) for one forward difference of gs, improving
  // the decay by one power of n until the remainder is absolutely summable.
  const int L = 5;
  cplx w = z / (1.0 - z);
  cplx tail(0.0, 0.0);
  cplx zpow = std::pow(z, double(M + 1));
  cplx level_factor(1.0, 0.0);
  for (int level = 0; level < L; ++level) {
    tail += level_factor * zpow * forward_diff(gs, M + 1, level) / (1.0 - z);
    level_factor *= w;
  }
  // Remaining absolutely convergent piece at level L.
  cplx rest(0.0, 0.0);
  cplx zp = zpow;
  double scale =
      (1.0 + std::abs(head)) / std::pow(std::max(1.0, std::abs(w)), L);
  for (long long n = M + 1; n < M + 200000; ++n) {
    cplx d = forward_diff(gs, n, L);
    rest += zp * d;
    zp *= z;
    if (std::abs(d) < 1e-17 * scale) break;
  }
  tail += level_factor * rest;
  return head + phase0 * tail;
}

cplx lerch_functional_equation_rhs(double alpha, cplx s) {
  if (!(s.real() > 1.0))
    throw std::domain_error(
        "lerch_functional_equation_rhs: requires Re s > 1");
  cplx plus = hurwitz_zeta(s, base_offset(alpha));
  cplx minus = hurwitz_zeta(s, base_offset(-alpha));
  cplx quarter = s * 0.25;
  cplx ep = std::exp(cplx(0.0, gammafun::TWO_PI) * quarter);
  cplx em = std::exp(cplx(0.0, -gammafun::TWO_PI) * quarter);
  cplx front =
      gammafun::complex_gamma(s) * std::exp(-s * gammafun::LOG_TWO_PI);
  return front * (ep * plus + em * minus);
}

}  // namespace momentlab::zetafun
