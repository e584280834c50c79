#include "momentlab/besselj.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "momentlab/gammafun.hpp"
#include "momentlab/mbintegral.hpp"

namespace momentlab::besselj {

namespace {

using gammafun::PI;
using mbintegral::cplx;

double series_small(int m, double y) {
  // Alternating series in long double; cancellation limits this to
  // moderate y, which is why the composite switches at 18.
  long double half = 0.5L * (long double)y;
  long double q = half * half;
  long double term = 1.0L;
  for (int j = 1; j <= m; ++j) term *= half / (long double)j;
  long double acc = term;
  for (int n = 1; n < 400; ++n) {
    term *= -q / ((long double)n * (long double)(n + m));
    acc += term;
    if (fabsl(term) < 1e-22L * (fabsl(acc) + 1e-30L) && n > m / 2) break;
  }
  return (double)acc;
}

double miller_once(int m, double y, int start) {
  double prev = 0.0, cur = 1e-30, norm = 0.0, wanted = 0.0;
  for (int j = start; j >= 1; --j) {
    double nxt = (2.0 * j / y) * cur - prev;
    prev = cur;
    cur = nxt;
    if (std::abs(cur) > 1e250) {  // rescale to dodge overflow
      cur *= 1e-250;
      prev *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
    int order_here = j - 1;
    if (order_here == m) wanted = cur;
    if (order_here >= 2 && order_here % 2 == 0) norm += cur;
  }
  norm = 2.0 * norm + cur;
  return wanted / norm;
}

double miller_backward(int m, double y) {
  // Downward recurrence from well above max(order, y); the normalisation
  // J_0 + 2 (J_2 + J_4 + ...) = 1 fixes the scale.  The start height is
  // raised until two consecutive runs agree, so the result is insensitive
  // to the usual start-index heuristics.
  int base = std::max(m, (int)std::ceil(y));
  int start = base + 18 + (int)(1.4 * std::sqrt(base + 1.0));
  if (start % 2) ++start;
  double v = miller_once(m, y, start);
  for (int round = 0; round < 5; ++round) {
    start += 24;
    double w = miller_once(m, y, start);
    if (std::abs(w - v) <= 1e-15 * (std::abs(w) + 1e-300)) return w;
    v = w;
  }
  return v;
}

double hankel_large(int m, double y) {
  // J_m(y) = sqrt(2/(pi y)) (P cos chi - Q sin chi), chi = y-(m/2+1/4)pi,
  // with the standard asymptotic P, Q truncated at their smallest terms.
  double mu = 4.0 * m * m;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double x8 = 8.0 * y;
  for (int k = 1; k < 20; ++k) {
    double f = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * x8);
    double nt = term * f;
    if (std::abs(nt) >= std::abs(term) && k > 2) break;
    term = nt;
    if (k % 2 == 1)
      q += (k % 4 == 1) ? term : -term;
    else
      p += (k % 4 == 2) ? -term : term;
  }
  double chi = y - (0.5 * m + 0.25) * PI;
  return std::sqrt(2.0 / (PI * y)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double y) {
  if (order < 0) throw std::domain_error("bessel_j: order >= 0");
  if (y < 0.0) throw std::domain_error("bessel_j: y >= 0");
  if (y == 0.0) return order == 0 ? 1.0 : 0.0;
  if (y <= 18.0) return series_small(order, y);
  if (y <= 60.0) return miller_backward(order, y);
  return hankel_large(order, y);
}

double bessel_j_mellin_barnes(double lambda, double y, double delta) {
  if (!(lambda > 0.5))
    throw std::domain_error("bessel_j_mellin_barnes: lambda > 1/2");
  if (!(y > 0.0)) throw std::domain_error("bessel_j_mellin_barnes: y > 0");
  double lo = 1.0 - 2.0 * lambda;
  if (!(delta > lo && delta < 0.0))
    throw std::domain_error(
        "bessel_j_mellin_barnes: delta must lie in (1 - 2 lambda, 0)");

  // Working line: deep for fast tail decay, but capped so the cancellation
  // scale (y/2)^{-sigma} stays near 1e3; a deep line with large y would
  // otherwise burn the entire double mantissa on cancellation.
  double ly = std::log(0.5 * y);
  double sigma = (lo + 0.25 < -0.3) ? lo + 0.25 : 0.5 * lo;
  if (ly > 0.0) sigma = std::max(sigma, -6.9 / ly);

  auto f = [&](double tau) -> cplx {
    cplx s(sigma, tau);
    cplx g = gammafun::log_gamma(lambda - 0.5 + 0.5 * s) -
             gammafun::log_gamma(lambda + 0.5 - 0.5 * s);
    return std::exp(g - s * ly);
  };
  auto dlog = [&](double tau) -> cplx {
    cplx s(sigma, tau);
    return cplx(0.0, 1.0) *
           (0.5 * gammafun::digamma(lambda - 0.5 + 0.5 * s) +
            0.5 * gammafun::digamma(lambda + 0.5 - 0.5 * s) - ly);
  };
  auto rate = [&](double tau) { return std::abs(dlog(tau)) + 0.3; };

  // Conjugate symmetry across tau = 0: integrate the upper ray, double the
  // real part.  Decay exponent on the line: |f| ~ |tau|^{sigma - 1}.
  double scale = std::exp(-sigma * ly);
  mbintegral::LineSpec spec;
  spec.f = f;
  spec.osc_rate = rate;
  spec.tau_begin = 0.0;
  spec.direction = 1.0;
  spec.abs_target = 1e-12 * (1.0 + scale);
  spec.tau_min = 8.0 + 2.0 * lambda;
  spec.tau_max = 2.0e5;
  spec.decay_power = sigma - 1.0;
  spec.start_clearance = sigma - lo;
  auto res = mbintegral::integrate_ray(spec, dlog);

  // value = (1/(4 pi i)) * i * int f dtau = (1/(4 pi)) * 2 Re(upper ray).
  return res.value.real() / (2.0 * PI);
}

}  // namespace momentlab::besselj
