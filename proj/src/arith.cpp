#include "momentlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentlab::arith {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace

cplx unit_phase(double x) {
  double r = x - std::floor(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

cplx unit_phase_frac(int64 num, int64 den) {
  if (den == 0) throw std::domain_error("unit_phase_frac: zero denominator");
  int64 r = num % den;
  if ((r < 0) != (den < 0) && r != 0) r += den;
  return unit_phase(static_cast<double>(r) / static_cast<double>(den));
}

std::optional<int64> mod_inverse(int64 x, int64 c) {
  if (c < 1) throw std::domain_error("mod_inverse: modulus must be >= 1");
  if (c == 1) return 0;
  int64 a = x % c;
  if (a < 0) a += c;
  // extended Euclid on (a, c)
  int64 r0 = a, r1 = c, s0 = 1, s1 = 0;
  while (r1 != 0) {
    int64 q = r0 / r1;
    int64 r2 = r0 - q * r1;
    int64 s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  if (r0 != 1) return std::nullopt;
  int64 inv = s0 % c;
  if (inv < 0) inv += c;
  return inv;
}

std::vector<std::pair<int64, int>> factorize(int64 n) {
  if (n < 1) throw std::domain_error("factorize: n must be >= 1");
  if (n > (int64(1) << 31)) throw std::domain_error("factorize: input exceeds 2^31 contract");
  std::vector<std::pair<int64, int>> f;
  for (int64 p = 2; p * p <= n; p += (p == 2) ? 1 : 2) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

bool is_prime(int64 n) {
  if (n < 2) return false;
  auto f = factorize(n);
  return f.size() == 1 && f[0].second == 1;
}

int64 euler_phi(int64 n) {
  int64 phi = n;
  for (auto& [p, e] : factorize(n)) {
    (void)e;
    phi -= phi / p;
  }
  return phi;
}

int moebius(int64 n) {
  int m = 1;
  for (auto& [p, e] : factorize(n)) {
    (void)p;
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

std::vector<int64> divisors(int64 n) {
  auto f = factorize(n);
  std::vector<int64> d{1};
  for (auto& [p, e] : f) {
    size_t base = d.size();
    int64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

int64 mu_star_mu(int64 m) {
  // multiplicative: 1, -2, 1, 0, 0, ... at p^0, p^1, p^2, p^{>=3}
  int64 v = 1;
  for (auto& [p, e] : factorize(m)) {
    (void)p;
    if (e == 1) v *= -2;
    else if (e == 2) v *= 1;
    else return 0;
  }
  return v;
}

double tau_it(int64 r, double t) {
  double s = 0.0;
  double lr = std::log(static_cast<double>(r));
  for (int64 a : divisors(r)) {
    // (a/b)^{it} with b = r/a; cos keeps the pair-symmetrized real value
    s += std::cos(t * (2.0 * std::log(static_cast<double>(a)) - lr));
  }
  return s;
}

Rational::Rational(__int128 n, __int128 d) : num(n), den(d) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) { num = -num; den = -den; }
  __int128 g = gcd128(num, den);
  if (g > 1) { num /= g; den /= g; }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::domain_error("Rational: division by zero");
  return Rational(num * o.den, den * o.num);
}
bool Rational::operator<(const Rational& o) const {
  return num * o.den < o.num * den;
}
double Rational::to_double() const {
  return static_cast<double>(num) / static_cast<double>(den);
}

Level make_level(int64 p, int nu) {
  if (!is_prime(p)) throw std::domain_error("make_level: p must be prime");
  if (nu < 1) throw std::domain_error("make_level: nu must be >= 1");
  int64 N = 1;
  for (int i = 0; i < nu; ++i) {
    if (N > std::numeric_limits<int64>::max() / p)
      throw std::domain_error("make_level: p^nu overflows");
    N *= p;
  }
  return Level{p, nu, N};
}

Rational phi_nu(const Level& level) {
  if (level.nu < 2) throw std::domain_error("phi_nu: requires nu >= 2");
  if (level.nu >= 3) return Rational(level.p - 1, level.p);
  // nu = 2: 1 - p/(p^2 - 1)
  __int128 p = level.p;
  return Rational(p * p - 1 - p, p * p - 1);
}

Rational sieve_weight(const Level& level) {
  if (level.nu < 2) throw std::domain_error("sieve_weight: requires nu >= 2");
  if (level.nu >= 3) return Rational(level.p);
  __int128 p = level.p;
  return Rational(p * p - 1, p);
}

}  // namespace momentlab::arith
