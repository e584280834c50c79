#pragma once

#include <complex>

#include "momentlab/arith.hpp"
#include "momentlab/trace.hpp"

// Shifted Dirichlet series over the geometric side (S, S1, S2), the twisted
// series g / g~ with their analytic continuations, the finite coefficients
// f_+ / f_-, and the error series V_N / V~_p in both the double-sum and the
// rearranged I_-/I_+ kernel forms.  This is the analytic mid-layer between
// the trace machinery and the assembled moments.

namespace momentlab::momentseries {

using arith::int64;
using cplx = std::complex<double>;
using trace::SeriesValue;

// Parameters of the shifted series: index l, shifts (u, v = it), the
// weight/order slot k (the attached Bessel order is 2k - 1), and the level
// whose multiples the modulus runs over.
struct ShiftedParams {
  int64 l = 1;
  cplx u = 0.0;
  double t = 0.0;
  int k = 2;
  arith::Level level;

  cplx v() const { return cplx(0.0, t); }
  bool coprime_to_p() const;
  // Re u > 3/4: the double sum over (n, q) converges absolutely.
  bool in_double_sum_domain() const;
  // 3/4 < Re u < k - 1: both V forms converge and the rearrangement holds.
  bool in_identity_domain() const;
};

enum class SKind { S, S1, S2 };
enum class GBranch { direct, continued };
enum class VForm { double_sum, kernel_form };

struct FCoefficient {
  int64 n = 0;
  int64 q = 0;
  cplx value{0.0, 0.0};
};

// Truncated shifted averages over the geometric side,
//   S1 = sum_n Delta_q(l, n) n^{-1/2-u-v},
//   S2 = sum_n Delta_q(l, np) n^{-1/2-u-v},
//   S  = the same sum restricted to (n, p) = 1,
// each cut at n_max.  The inner c-sums run through the batched sweep with a
// certified Weil tail; the dropped n > n_max range enters the reported
// bound through the trivial estimate zeta_tail(1/2 + Re u, n_max) times the
// largest observed |Delta|, which is deliberately crude (the exact
// inclusion-exclusion S = S1 - p^{-1/2-u-v} S2 aligns termwise under
// truncation, so identity tests do not depend on it).  q_target is the
// certified budget for the summed inner c-sum remainders.
SeriesValue series_S(const ShiftedParams& sp, SKind kind, int64 n_max,
                     double q_target = 1e-6);

// g(s, v; q) = sum_n Kl(l, n; q) n^{-s-v}.
//   direct     needs Re s > 1: grouped by residue class mod q into q
//              Hurwitz zeta values (no truncation error beyond the zeta
//              evaluations themselves),
//   continued  needs Re s < 0: Gamma(1-s-v) (2 pi / q)^{s+v-1} times the
//              phase-paired twisted series, each reduced to phi(q) Hurwitz
//              zeta values grouped by the residue class of n*.
// The closed strip 0 <= Re s <= 1 converges in neither branch and throws.
cplx g_series(cplx s, double t, int64 q, int64 l, GBranch branch);

// g~(s, v; q) = sum_n Kl(l, np; q) n^{-s-v} for p | q and (l, p) = 1.  At
// q = p every Kloosterman value collapses to the Ramanujan sum -1 and the
// result is -zeta(s+v), returned analytically; larger q go through the
// same residue-class grouping as the direct branch of g (Re s > 1).
cplx g_tilde_series(cplx s, double t, int64 q, int64 p, int64 l);

// f_{+/-}(n): zero unless (n, q/p) = 1, else e(+/- l n*/q) times the sum of
// e(l s/p) over 1 <= s <= p with (+/- n* + s q/p, p) = 1, where n* is the
// least non-negative inverse of n mod q/p.  The value does not depend on
// the representative chosen for n* (prefactor and s-window shift together).
// Exactly zero when p | q/p (the s-window condition never fails and the
// full e(l s/p) sum cancels).  |value| <= 1 always; violation of that
// bound by more than 1e-12 throws, since it would mean broken arithmetic.
FCoefficient f_pm(int sign, int64 n, int64 q, int64 p, int64 l);

// V_N(u, v; k) in its two forms.
//
//   double_sum   sum_n n^{-1/2-u-v} sum_{q = 0 mod N} Kl(l,n;q)/q
//                  J_{2k-1}(4 pi sqrt(ln)/q),   needs Re u > 3/4.
//     The inner q-sums come from one batched sweep (an FFT per modulus
//     serves every n) and carry rigorous Weil tails.  The dropped n-range
//     is estimated from the measured net size of the last dyadic blocks
//     with a factor-10 safety margin: this close to the abscissa of
//     convergence an absolute-value bound on the n-tail decays too slowly
//     to certify anything a sweep could afford, while the actual signed
//     tail is orders of magnitude smaller.  The halving property test
//     validates the estimate.
//
//   kernel_form  sum_{q = 0 mod N} (2pi)^{u+v-1/2} q^{-1/2-u-v} [
//                  e(theta) sum_{(n,q)=1} e(+n* l/q) n^{-(1/2-u-v)} I_-
//                + e(-theta) sum_{(n,q)=1} e(-n* l/q) n^{-(1/2-u-v)} I_+ ],
//     theta = (1/2-u-v)/4, kernel argument x = q n/(2 pi l).  Valid as an
//     identity for 3/4 < Re u < k-1; at u = 0 this form IS the definition
//     of V_N (the analytic continuation the moment formulas use), and the
//     double sum is not attempted there.  The q-tail is bounded through
//     the confluent-series majorant of |I| in closed form; per-q n-tails
//     are rigorous zeta-tails when k - Re u > 3/2 and otherwise fall back
//     to the same measured dyadic estimate.
//
// Smallest-argument caveat: the confluent majorant needs 2 pi l / q <= 30;
// moduli below that (tiny q against large l) get their values from
// quadrature and their remainders from the measured-estimate path.
SeriesValue series_V(const ShiftedParams& sp, VForm form, double tail_target);

// V~_p(u, v; k): the p-twisted companion that the nu = 2 sieve produces
// (sp.level.nu == 2; the modulus runs over q = 0 mod p with (q/p, p) = 1),
//   polar term  -(1/p) Gamma(k-u-v)/Gamma(k+u+v) (sqrt p/(2 pi sqrt l))^{1-2u-2v}
// plus the f_+/f_- twisted kernel sums with prefactor
// (2 pi p)^{u+v-1/2} q^{-1/2-u-v} and the same kernel argument
// x = q n/(2 pi l).  Same domain and tail rules as series_V kernel_form.
// The polar term alone is exposed separately because the nu = 2 moment
// assembly splits it off into the secondary main term.
cplx v_tilde_polar(const ShiftedParams& sp);
SeriesValue series_V_tilde(const ShiftedParams& sp, double tail_target);

}  // namespace momentlab::momentseries
