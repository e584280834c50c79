#pragma once

#include <complex>

#include "momentlab/arith.hpp"

// Assembled moment formulas at prime-power level: the explicit first moment
// for nu >= 3 and nu = 2, the cross-check of that assembly against the
// primitive-trace Dirichlet series, the V_N magnitude envelope, and the
// second-moment main term.

namespace momentlab::moments {

using arith::int64;
using cplx = std::complex<double>;

// One first moment, split the way the explicit formula states it.  total is
// main + secondary + kernel exactly; error_envelope combines the magnitude
// envelope of the kernel corrections (implied constant 1) with the
// truncation prices actually paid by the series evaluations, so it is a
// diagnostic scale, not a certified error.
struct MomentResult {
  cplx main_term{0.0, 0.0};
  cplx secondary_term{0.0, 0.0};     // nu = 2 polar contribution, else 0
  cplx kernel_correction{0.0, 0.0};  // the 2 pi i^{2k} V terms
  double error_envelope = 0.0;
  cplx total{0.0, 0.0};
};

// Explicit M1(l, 0, it) at level p^nu, nu >= 2, k >= 2.  p | l gives the
// all-zero result.  The kernel corrections are the analytically continued
// V series at u = 0; their internal tail targets honor tail_target down to
// an envelope-proportional floor (arbitrarily tight targets are not
// reachable at u = 0 and the achieved price is reported instead).
MomentResult m1_explicit(int64 l, double t, int k, const arith::Level& level,
                         double tail_target);

// Both sides of the sieve decomposition at a shift u inside the absolute
// convergence region.  lhs sums the primitive-trace series directly over
// the Bessel-sweep pipeline; rhs assembles the same moment through the
// continued kernel forms.  The two routes share nothing above the
// Kloosterman and special-function layers, so gap is a genuine cross-check
// and must lie within lhs_bound + rhs_bound.
struct CrossCheck {
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double gap = 0.0;
  double lhs_bound = 0.0;
  double rhs_bound = 0.0;
};
CrossCheck m1_cross_check(int64 l, double t, int k, const arith::Level& level,
                          double u, int64 n_max);

// Magnitude envelope for V_N(0, it, k) with implied constant 1 and the
// reporting epsilon fixed at 0.01.  Branches on d0 = 4 pi e l T / (N k),
// T = 1 + |t|: for d0 >= 1 the estimate is (sqrt(l) (lT)^eps / N) *
// max(sqrt(T)/k, 1/sqrt(k)); below it, (1/sqrt(lT)) (d0/2)^k.
double v_estimate(int64 l, double t, int k, const arith::Level& level);

// Second-moment main term: the displayed two-piece formula with the
// digamma pair at k +- it; p | l gives zero.  No error term is computed.
cplx m2_main_term(int64 l, double t, int k, const arith::Level& level);

}  // namespace momentlab::moments
