#pragma once

#include <complex>
#include <vector>

// Hurwitz, Riemann and Lerch zeta values.  The Hurwitz evaluator is the
// workhorse behind every analytic continuation in the series layer, so it
// exposes a family form that shares the power table across integer shifts.

namespace momentlab::zetafun {

using cplx = std::complex<double>;

// Euler-Maclaurin continuation of zeta(z, a) = sum_{m>=0} (m+a)^{-z},
// valid for all z != 1, a > 0.  Throws at the pole and on a <= 0.
cplx hurwitz_zeta(cplx z, double a);

// { zeta(z0 + j, a) : j = 0..count-1 } sharing one log/power table.
// Requires that no z0 + j hits the pole at 1.
std::vector<cplx> hurwitz_zeta_family(cplx z0, double a, int count);

cplx riemann_zeta(cplx z);

// Lerch zeta  zeta(alpha, beta; s) = sum_{n + alpha > 0} e(n beta) (n+alpha)^{-s}.
// Integer beta reduces to a Hurwitz value (any s != 1); non-integer beta is
// summed with an iterated Abel tail, valid for Re s > 0.  The value is
// 1-periodic in beta and, for the alpha slot used by the functional
// equation, invariant under alpha -> alpha + 1 by construction.
cplx lerch_zeta(double alpha, double beta, cplx s);

// Right-hand side of the functional equation for zeta(0, alpha; 1-s):
//   Gamma(s)/(2 pi)^s * ( e(s/4) zeta(alpha,0;s) + e(-s/4) zeta(-alpha,0;s) ).
// Requires Re s > 1 so both one-sided sums converge absolutely.
cplx lerch_functional_equation_rhs(double alpha, cplx s);

}  // namespace momentlab::zetafun
