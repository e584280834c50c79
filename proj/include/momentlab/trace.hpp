#pragma once

#include <complex>
#include <vector>

#include "momentlab/arith.hpp"

// Geometric side of the Petersson formula for the weight-2k level-N basis,
//   Delta(m,n) = delta_{m=n} + 2 pi i^{-2k} sum_{c = 0 mod N}
//                  Kl(m,n;c)/c J_{2k-1}(4 pi sqrt(mn)/c),
// truncated with a certified tail bound, plus the sieve Delta* that removes
// oldforms from a prime-power level.

namespace momentlab::trace {

using arith::int64;
using cplx = std::complex<double>;

struct TraceQuery {
  int64 m = 1;
  int64 n = 1;
  int k = 2;             // weight is 2k
  arith::Level level;    // from arith::make_level
};

// A truncated series together with a rigorous bound on everything dropped.
struct SeriesValue {
  cplx value{0.0, 0.0};
  double truncation_bound = 0.0;
  int64 terms_used = 0;
};

// Bound on the absolute value of the c-sum beyond the first `count` moduli
// c = jN, j <= count.  Uses the first-term Bessel majorant
// |J_{2k-1}(y)| <= (y/2)^{2k-1} / (2k-1)!  (valid once y <= 2 sqrt(2k),
// where the power series alternates with decreasing terms) together with
// the better of |Kl(m,n;c)| <= c and the Weil bound
// |Kl(m,n;c)| <= 3.54 c^{1/3} sqrt(gcd(m,n)) sqrt(c); the remaining
// j-power tails are summed in closed form.  Returns +infinity while the
// majorant is not yet valid on the whole tail.
double geometric_tail_bound(const TraceQuery& q, int64 count);

// Smallest count whose tail bound meets tail_target.  Throws
// std::runtime_error if no count with c = jN <= 1e8 suffices, before any
// series work happens.
int64 geometric_term_count(const TraceQuery& q, double tail_target);

// Truncated geometric side: delta term plus the first `count` moduli.
// Terms are accumulated in fixed blocks of 512 consecutive j and the block
// sums combined in index order, so the result is byte-identical for every
// worker count (see runtime::thread_count).  The imaginary part is exactly
// zero: every summand is real.
SeriesValue delta_geometric_truncated(const TraceQuery& q, int64 count);

// Convenience wrapper: truncate at geometric_term_count(q, tail_target).
SeriesValue delta_geometric(const TraceQuery& q, double tail_target);

// Sieved average over newforms of prime-power level N = p^nu, nu >= 2:
//   Delta*(m,n) = Delta_N(m,n) - Delta_{N/p}(m,n) / w,
// with w = p - 1/p when nu = 2 and w = p otherwise, and exactly zero when
// p divides mn.  The two tail targets are split so the combined
// truncation_bound stays below tail_target.
SeriesValue delta_star(const TraceQuery& q, double tail_target);

// The geometric c-sums for a whole block of second indices at once:
//   csum[n-1] = sum_{j <= j_count} Kl(l, n; jN)/(jN) J_{2k-1}(4 pi sqrt(ln)/(jN)).
// One Kloosterman DFT per modulus serves every n simultaneously and the
// Bessel factor comes from a cubic-interpolated table, so a sweep costs
// little more than its FFTs.  Series built on top of these sums weight the
// indices by n^{-sigma}, which is why the truncation helpers below take the
// weight exponent instead of a per-index target.
struct GeometricBatch {
  int64 l = 1;
  int k = 2;
  arith::Level level;
  int64 j_count = 0;
  std::vector<double> csum;

  // Rigorous bound on the dropped j > j_count part for index n (same
  // majorant/Weil split as geometric_tail_bound; +infinity while the
  // majorant does not yet cover the tail for this n).
  double tail_bound(int64 n) const;
};

// sum_{n <= n_max} n^{-weight_exponent} tail_bound(n) for a candidate
// truncation, evaluated in closed form without building the batch.
double batched_tail_weighted(int64 l, int k, const arith::Level& level,
                             int64 n_max, double weight_exponent,
                             int64 j_count);

// Smallest j_count whose weighted tail sum meets target; throws
// std::runtime_error beyond c = jN = 1e8 like geometric_term_count.
int64 batched_count_for(int64 l, int k, const arith::Level& level,
                        int64 n_max, double weight_exponent, double target);

// Build the batch.  Moduli are processed in blocks of 512 consecutive j
// with per-block partial csum vectors combined in index order, so the
// result is byte-identical for every worker count.
GeometricBatch batched_geometric(int64 l, int k, const arith::Level& level,
                                 int64 n_max, int64 j_count);

}  // namespace momentlab::trace
