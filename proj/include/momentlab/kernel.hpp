#pragma once

#include <complex>

// The Bessel-transform kernel pair I_+/I_- that carries the analytic
// continuation of the shifted divisor-type series in the first moment.
// Three independent representations are kept alive deliberately: a closed
// form through the confluent hypergeometric function, the residue series
// over the left pole ladder, and direct contour quadrature.  Their mutual
// agreement is a standing invariant of the test suite.

namespace momentlab::kernel {

using cplx = std::complex<double>;

struct KernelArgs {
  cplx u;     // first shift; Re u in [0, 1) in all uses here
  double t;   // spectral parameter, v = i t with Re v = 0 enforced by type
  int k;      // half of the weight, k >= 2
  double x;   // positive argument

  KernelArgs(cplx u_, double t_, int k_, double x_);

  cplx v() const { return cplx(0.0, t); }
  double T() const { return 1.0 + std::abs(t); }
};

enum class KernelRep { closed_form, residue_series, quadrature };

const char* to_string(KernelRep rep);

struct KernelEval {
  cplx value{0.0, 0.0};
  KernelRep representation = KernelRep::closed_form;
  double abs_error_estimate = 0.0;
};

// Kummer's function 1F1(a; b; z) by Taylor series in extended precision.
// Requires |z| <= 30 and b away from the non-positive integers.
cplx hyp1f1(cplx a, cplx b, cplx z);

// I_sign(u, v, k, x) for sign = +1 / -1.
//   closed_form     e(sign(1-2k)/8) x^{1/2-k} Gamma(k-v-u)/Gamma(2k)
//                     * 1F1(k-v-u; 2k; sign i / x),        needs x >= 1/30
//   residue_series  sum over the left pole ladder,          needs x > T e / k
//   quadrature      contour integral on a vertical line deep in the
//                   analyticity strip, one integration by parts closing the
//                   polynomially decaying side,              any x > 0
KernelEval kernel_I(int sign, const KernelArgs& args, KernelRep rep);

// Representation choice by domain: residue series well inside its region
// of fast convergence, closed form for moderate x, quadrature otherwise.
KernelEval kernel_I_auto(int sign, const KernelArgs& args);

// Size envelope with the branch point at x = T e / k:
//   x >  T e / k : exp(-pi T/2) sqrt(x/T) (e T/(x k))^k       (both signs)
//   x <= T e / k : x^{-1/2} max(sqrt(T)/k, 1/sqrt(k))         (sign -)
//                  x^{-1/2} / sqrt(k + T)                     (sign +)
// The small-x expressions bound e^{pi|t|/2} I_- and e^{-pi|t|/2} I_+; the
// large-x expression bounds I_+/- directly.
double kernel_bound_envelope(int sign, const KernelArgs& args);

}  // namespace momentlab::kernel
