#include "momentlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "momentlab/arith.hpp"
#include "momentlab/gammafun.hpp"
#include "momentlab/mbintegral.hpp"

namespace momentlab::kernel {

namespace {

using gammafun::PI;
using gammafun::TWO_PI;
using ldcplx = std::complex<long double>;

bool near_nonpositive_int(cplx b) {
  double r = std::round(b.real());
  return r <= 0.0 && std::abs(b.real() - r) < 1e-12 &&
         std::abs(b.imag()) < 1e-12;
}

KernelEval closed_form(int sign, const KernelArgs& a) {
  if (!(a.x >= 1.0 / 30.0))
    throw std::domain_error("kernel_I closed form: needs x >= 1/30");
  cplx av = cplx(double(a.k), 0.0) - a.v() - a.u;
  cplx z(0.0, double(sign) / a.x);
  cplx hyper = hyp1f1(av, cplx(2.0 * a.k, 0.0), z);
  cplx phase = arith::unit_phase_frac(int64_t(sign) * (1 - 2 * a.k), 8);
  cplx front = gammafun::complex_gamma(av) /
               gammafun::complex_gamma(cplx(2.0 * a.k, 0.0));
  double xpow = std::pow(a.x, 0.5 - a.k);
  KernelEval out;
  out.value = phase * xpow * front * hyper;
  out.representation = KernelRep::closed_form;
  // Cancellation in the 1F1 sum peaks near e^{|z|}; extended precision
  // keeps that below ~1e-19 e^{1/x} relative to the largest term.
  double cancel = std::exp(std::min(30.0, 1.0 / a.x));
  out.abs_error_estimate =
      std::abs(front) * xpow * (1e-19 * cancel + 1e-14 * std::abs(hyper));
  return out;
}

KernelEval residue_series(int sign, const KernelArgs& a) {
  if (!(a.x > a.T() * std::exp(1.0) / a.k))
    throw std::domain_error("kernel_I residue series: needs x > T e / k");
  cplx av = cplx(double(a.k), 0.0) - a.v() - a.u;
  cplx acc(0.0, 0.0);
  double xj = std::pow(a.x, 0.5 - a.k);
  cplx lgj(0.0, 0.0);  // log j!
  double err = 0.0;
  for (int j = 0; j < 500; ++j) {
    cplx mag = std::exp(gammafun::log_gamma(av + double(j)) -
                        gammafun::log_gamma(cplx(2.0 * a.k + j, 0.0)) - lgj);
    cplx phase = arith::unit_phase_frac(
        int64_t(sign) * (1 - 2 * (a.k + j)) + 4 * int64_t(j), 8);
    cplx term = mag * phase * xj;
    acc += term;
    double ratio = std::abs(av + double(j)) /
                   ((2.0 * a.k + j) * (j + 1.0) * a.x);
    if (std::abs(term) < 1e-17 * std::abs(acc) && j > 2) {
      err = std::abs(term) * ratio / std::max(1e-3, 1.0 - ratio);
      break;
    }
    xj /= a.x;
    lgj += std::log(cplx(j + 1.0, 0.0));
  }
  KernelEval out;
  out.value = acc;
  out.representation = KernelRep::residue_series;
  out.abs_error_estimate = err + 1e-15 * std::abs(acc);
  return out;
}

KernelEval quadrature(int sign, const KernelArgs& a) {
  // Vertical line deep in the strip: sigma = 1/2 - k + 1/4 stays a fixed
  // distance from the left pole ladder while maximising tail decay.  The
  // integrand is pole-free between the ladders, so any line there gives
  // the same value; horizontal connectors vanish polynomially.
  double sigma = 0.5 - a.k + 0.25;
  double lx = std::log(a.x);
  cplx v = a.v();
  double halfpi_sign = 0.5 * PI * sign;

  auto F = [&](double tau) -> cplx {
    cplx s(sigma, tau);
    cplx A = cplx(a.k - 0.5, 0.0) + s;
    cplx B = cplx(a.k + 0.5, 0.0) - s;
    cplx C = cplx(0.5, 0.0) - a.u - v - s;
    cplx lg = gammafun::log_gamma(A) - gammafun::log_gamma(B) +
              gammafun::log_gamma(C) + s * lx +
              cplx(0.0, halfpi_sign) * s;
    return std::exp(lg);
  };
  auto dlogF = [&](double tau) -> cplx {
    cplx s(sigma, tau);
    cplx A = cplx(a.k - 0.5, 0.0) + s;
    cplx B = cplx(a.k + 0.5, 0.0) - s;
    cplx C = cplx(0.5, 0.0) - a.u - v - s;
    return cplx(0.0, 1.0) * (gammafun::digamma(A) + gammafun::digamma(B) -
                             gammafun::digamma(C) + lx +
                             cplx(0.0, halfpi_sign));
  };
  auto rate = [&](double tau) { return std::abs(dlogF(tau)) + 0.3; };

  double peak = 0.0;
  for (double tau : {0.0, 1.0, -1.0, 3.0, -3.0, -a.t, -a.t - 2.0, -a.t + 2.0})
    peak = std::max(peak, std::abs(F(tau)));
  double target = 1e-10 * peak + 1e-16;

  // The e(sign s/4) factor kills one half-line exponentially and leaves
  // the other with polynomial decay |tau|^{sigma - 1 - Re u}.
  double poly_dir = (sign > 0) ? -1.0 : 1.0;

  mbintegral::LineSpec poly;
  poly.f = F;
  poly.osc_rate = rate;
  poly.tau_begin = 0.0;
  poly.direction = poly_dir;
  poly.abs_target = target;
  poly.tau_min = std::abs(a.t) + 12.0;
  poly.tau_max = 5.0e5;
  poly.decay_power = sigma - 1.0 - a.u.real();
  // Nearest poles off the line: the first of the left ladder of A sits
  // 1/4 below the start, the right ladder of C is at least k - Re u - 1/4
  // away (shifted by t along the line).
  poly.start_clearance =
      std::min(a.k - 0.5 + sigma,
               std::hypot(a.t + a.u.imag(), 0.5 - a.u.real() - sigma));
  auto poly_res = mbintegral::integrate_ray(poly, dlogF);

  mbintegral::LineSpec expo = poly;
  expo.direction = -poly_dir;
  expo.tau_min = std::abs(a.t) + 10.0;
  expo.tau_max = 600.0;
  auto expo_res = mbintegral::integrate_ray_decaying(expo);

  KernelEval out;
  out.value = (poly_res.value + expo_res.value) / TWO_PI;
  out.representation = KernelRep::quadrature;
  out.abs_error_estimate =
      (poly_res.tail_estimate + expo_res.tail_estimate) / TWO_PI +
      1e-12 * std::abs(out.value) + 1e-13 * peak;
  return out;
}

}  // namespace

KernelArgs::KernelArgs(cplx u_, double t_, int k_, double x_)
    : u(u_), t(t_), k(k_), x(x_) {
  if (k < 2) throw std::domain_error("KernelArgs: k >= 2");
  if (!(x > 0.0)) throw std::domain_error("KernelArgs: x > 0");
  if (!(u.real() >= 0.0 && u.real() < 1.0))
    throw std::domain_error("KernelArgs: Re u in [0, 1)");
}

const char* to_string(KernelRep rep) {
  switch (rep) {
    case KernelRep::closed_form: return "closed_form";
    case KernelRep::residue_series: return "residue_series";
    case KernelRep::quadrature: return "quadrature";
  }
  return "unknown";
}

cplx hyp1f1(cplx a, cplx b, cplx z) {
  if (std::abs(z) > 30.0)
    throw std::domain_error("hyp1f1: |z| <= 30 supported");
  if (near_nonpositive_int(b))
    throw std::domain_error("hyp1f1: b at a non-positive integer");
  ldcplx la(a.real(), a.imag()), lb(b.real(), b.imag()),
      lz(z.real(), z.imag());
  ldcplx term(1.0L, 0.0L), acc(1.0L, 0.0L);
  for (int j = 0; j < 600; ++j) {
    term *= (la + (long double)j) / (lb + (long double)j) * lz /
            (long double)(j + 1);
    acc += term;
    if (std::abs(term) < 1e-21L * std::abs(acc) && j > 4) break;
  }
  return cplx((double)acc.real(), (double)acc.imag());
}

KernelEval kernel_I(int sign, const KernelArgs& args, KernelRep rep) {
  if (sign != 1 && sign != -1)
    throw std::domain_error("kernel_I: sign must be +1 or -1");
  switch (rep) {
    case KernelRep::closed_form: return closed_form(sign, args);
    case KernelRep::residue_series: return residue_series(sign, args);
    case KernelRep::quadrature: return quadrature(sign, args);
  }
  throw std::domain_error("kernel_I: unknown representation");
}

KernelEval kernel_I_auto(int sign, const KernelArgs& args) {
  double edge = args.T() * std::exp(1.0) / args.k;
  if (args.x > 1.5 * edge) return residue_series(sign, args);
  if (args.x >= 1.0 / 30.0) return closed_form(sign, args);
  return quadrature(sign, args);
}

double kernel_bound_envelope(int sign, const KernelArgs& args) {
  double T = args.T();
  double k = args.k;
  double x = args.x;
  if (x > T * std::exp(1.0) / k) {
    return std::exp(-0.5 * PI * T) * std::sqrt(x / T) *
           std::pow(std::exp(1.0) * T / (x * k), k);
  }
  if (sign < 0) return std::max(std::sqrt(T) / k, 1.0 / std::sqrt(k)) / std::sqrt(x);
  return 1.0 / (std::sqrt(x) * std::sqrt(k + T));
}

}  // namespace momentlab::kernel
