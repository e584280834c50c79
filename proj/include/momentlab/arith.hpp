#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

// Exact integer / rational arithmetic shared by every other module:
// totients, Moebius combinatorics, modular inverses, the divisor sum
// tau_it(r) = sum_{ab=r} (a/b)^{it}, and prime-power level bookkeeping.

namespace momentlab::arith {

using int64 = std::int64_t;
using cplx = std::complex<double>;

// e(x) = exp(2*pi*i*x).  The argument is reduced mod 1 before multiplying
// by 2*pi so large rational phases keep full precision.
cplx unit_phase(double x);

// e(num/den) with the reduction done in integer arithmetic.
cplx unit_phase_frac(int64 num, int64 den);

// Modular inverse in [0,c); absent when gcd(x,c) != 1.  c >= 1.
std::optional<int64> mod_inverse(int64 x, int64 c);

// Trial-division factorization as (prime, exponent) pairs, increasing primes.
// Inputs are capped at 2^31; larger moduli never occur in this artifact.
std::vector<std::pair<int64, int>> factorize(int64 n);

bool is_prime(int64 n);

int64 euler_phi(int64 n);

int moebius(int64 n);

// All divisors of n, increasing.
std::vector<int64> divisors(int64 n);

// Dirichlet square of Moebius: sum_{d|m} mu(d) mu(m/d).
int64 mu_star_mu(int64 m);

// tau_it(r) = sum_{ab=r} (a/b)^{it}.  Pairing (a,b) with (b,a) makes the
// value exactly real, so the sum is accumulated as cosines.
double tau_it(int64 r, double t);

// Exact rational on 128-bit integers, always normalized (den > 0, gcd = 1).
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  Rational() = default;
  Rational(int64 n) : num(n), den(1) {}
  Rational(__int128 n, __int128 d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  bool operator<(const Rational& o) const;
  double to_double() const;
};

// Prime-power level N = p^nu.  nu >= 2 for sieve-facing operations; nu = 1
// appears only as the internal N/p recursion endpoint.
struct Level {
  int64 p = 0;
  int nu = 0;
  int64 N = 0;
};

// Validates p prime, nu >= 1, N = p^nu within 2^63-1.
Level make_level(int64 p, int nu);

// phi_nu(N): 1 - 1/p for nu >= 3, 1 - p/(p^2-1) for nu = 2.  Exact.
Rational phi_nu(const Level& level);

// Weight dividing the lower level in the primitivity sieve:
// p - 1/p for nu = 2, p for nu >= 3.
Rational sieve_weight(const Level& level);

}  // namespace momentlab::arith
