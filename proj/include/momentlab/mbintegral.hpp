#pragma once

#include <complex>
#include <functional>

// Panel quadrature for vertical-line Mellin-Barnes integrals.  The
// integrands here are smooth with slowly growing oscillation (phase
// derivative ~ log tau), so fixed 16-point Gauss-Legendre panels with
// oscillation-aware widths converge fast; polynomially decaying tails are
// closed with one integration by parts against the full logarithmic
// derivative of the integrand.

namespace momentlab::mbintegral {

using cplx = std::complex<double>;

// integral of f over [a, b] by 16-point Gauss-Legendre.
cplx gauss_legendre_16(double a, double b,
                       const std::function<cplx(double)>& f);

struct LineSpec {
  std::function<cplx(double)> f;          // integrand on the line, f(tau)
  std::function<double(double)> osc_rate; // |d/dtau log f| estimate, panel sizing
  double tau_begin = 0.0;
  double direction = 1.0;                 // +1 marches up, -1 marches down
  double abs_target = 1e-12;              // stop once tail estimate below this
  double tau_min = 20.0;                  // never stop before this
  double tau_max = 2.0e5;                 // hard cap
  double decay_power = -2.0;              // p with |f| ~ C |tau|^p on this side
  // Distance from tau_begin to the nearest singularity of f in the complex
  // tau plane (for gamma-quotient integrands: how far the contour passes
  // from the closest pole).  Panels near the start are shrunk so their
  // Bernstein ellipse stays clear of it; rate sampling alone misses the
  // pole when large digamma terms cancel at the expansion point.
  double start_clearance = 1.0e30;
};

struct LineResult {
  cplx value{0.0, 0.0};       // marched integral including tail correction
  double tail_estimate = 0.0; // residual error estimate after correction
  double tau_stop = 0.0;
  long long evaluations = 0;
};

// Marches panels from tau_begin in the given direction.  Once the plain
// tail estimate |f(T)| T / |p+1| falls below abs_target, or the corrected
// estimate does, closes with the boundary term -f(T)/g'(T) of one
// integration by parts, where g' = (d/dtau) log f is supplied by the caller.
LineResult integrate_ray(const LineSpec& spec,
                         const std::function<cplx(double)>& dlog_f);

// Simple marched ray for integrands that die exponentially: stops when the
// last panel is below abs_target and |f| at the edge is negligible.
LineResult integrate_ray_decaying(const LineSpec& spec);

}  // namespace momentlab::mbintegral
