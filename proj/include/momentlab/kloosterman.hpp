#pragma once

#include <memory>
#include <vector>

#include "momentlab/arith.hpp"

// Classical Kloosterman sums Kl(m,n;c) = sum_{x mod c, (x,c)=1} e((mx+nx*)/c)
// with xx* = 1 (mod c).  Real-valued by the x <-> x* symmetry.

namespace momentlab::kloosterman {

using arith::int64;

struct KloostermanQuery {
  int64 m = 1;
  int64 n = 1;
  int64 c = 1;
};

// Inverse table mod c: tab[x] = x^{-1} in [0,c) for units, 0 otherwise.
// Built with one extended Euclid plus three multiplications per unit
// (prefix-product batching); cached per modulus behind a lock, immutable
// after construction.
std::shared_ptr<const std::vector<int64>> inverse_table(int64 c);

// Drop cached tables (test hook; evaluation never needs it).
void clear_inverse_cache();

// Direct O(c) evaluation.  Throws if the 1e-10 * phi(c) imaginary-part
// guarantee is violated, which would indicate a broken inverse table.
double kloosterman_sum(const KloostermanQuery& q);
double kloosterman_sum(int64 m, int64 n, int64 c);

// Same value, computed as the product over prime-power factors of c
// (twisted multiplicativity) without touching the shared table cache.
// Preferred for long sweeps that visit each modulus once: the cost drops
// to the largest prime-power divisor of c.
double kloosterman_sum_uncached(int64 m, int64 n, int64 c);

// Kl(l, r; q) for every residue r in [0, q) at once: the DFT of
// a[y] = e(l y* / q) over units y.  O(q log q) via FFTW, deterministic
// plans.  Row 0 is the Ramanujan sum Kl(l, q; q).
std::vector<double> kloosterman_all(int64 l, int64 q);

// True iff some prime p has p^2 | c, p | m, p and n coprime; the sum then
// vanishes identically.  The explicit-p form checks exactly that triple.
bool royer_vanishing_holds(const KloostermanQuery& q, int64 p);
bool royer_vanishing(int64 m, int64 n, int64 c);

// |Kl(m,n;c)| <= tau(c) sqrt(gcd(m,n,c)) sqrt(c), with tau evaluated
// exactly; the analytic variant replaces tau(c) by 3.54 c^{1/3} so tails
// can be integrated without factoring every modulus.
double weil_bound(int64 m, int64 n, int64 c);
double weil_bound_analytic(int64 m, int64 n, int64 c);

// sum_{c <= x} tau(c) <= x (ln x + 1): hyperbola-method count used by the
// divisor-averaged tail estimates.
double divisor_sum_bound(double x);

}  // namespace momentlab::kloosterman
