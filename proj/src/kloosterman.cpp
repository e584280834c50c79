#include "momentlab/kloosterman.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace momentlab::kloosterman {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::mutex g_cache_mutex;
std::map<int64, std::shared_ptr<const std::vector<int64>>> g_inverse_cache;
int64 g_cache_elements = 0;
constexpr int64 kCacheElementCap = int64(1) << 22;

void fill_inverse_table(int64 c, std::vector<int64>& tab) {
  tab.assign(c, 0);
  if (c == 1) return;
  // mark non-units by striding each prime factor, then batch-invert the
  // rest: prefix products, one inversion at the top, walk back down
  thread_local std::vector<uint8_t> is_unit;
  is_unit.assign(c, 1);
  is_unit[0] = 0;
  for (const auto& [p, e] : arith::factorize(c))
    for (int64 x = 0; x < c; x += p) is_unit[x] = 0;
  thread_local std::vector<int64> units, prefix;
  units.clear();
  for (int64 x = 1; x < c; ++x)
    if (is_unit[x]) units.push_back(x);
  prefix.resize(units.size());
  int64 run = 1;
  for (size_t i = 0; i < units.size(); ++i) {
    run = (run * units[i]) % c;
    prefix[i] = run;
  }
  int64 q = *arith::mod_inverse(run, c);
  for (size_t i = units.size(); i-- > 0;) {
    int64 pre = (i == 0) ? 1 : prefix[i - 1];
    tab[units[i]] = (pre * q) % c;
    q = (q * units[i]) % c;
  }
}

std::shared_ptr<const std::vector<int64>> build_inverse_table(int64 c) {
  auto tab = std::make_shared<std::vector<int64>>();
  fill_inverse_table(c, *tab);
  return tab;
}

// Histogram the phase index t = (mx + nx*) mod c, then pair cnt[t] with
// cnt[c-t] (exact imaginary-part cancellation) and take the cosine dot
// product.  The cosines advance by one complex rotation per t, re-anchored
// from polar form every 512 steps, so the whole pass costs a few flops per
// index instead of a libm call.
double histogram_eval(int64 mr, int64 nr, int64 c, const std::vector<int64>& inv) {
  thread_local std::vector<int32_t> cnt;
  cnt.assign(c, 0);
  for (int64 x = 1; x < c; ++x) {
    int64 xi = inv[x];
    if (xi == 0) continue;
    int64 t = (mr * x) % c;
    t = (t + nr * xi) % c;
    ++cnt[t];
  }
  for (int64 t = 1; 2 * t < c; ++t)
    if (cnt[t] != cnt[c - t])
      throw std::runtime_error("kloosterman_sum: imaginary part exceeds tolerance");
  double re = double(cnt[0]);
  if (c % 2 == 0) re -= double(cnt[c / 2]);
  const double ang = kTwoPi / double(c);
  const std::complex<double> rot(std::cos(ang), std::sin(ang));
  std::complex<double> ph = rot;
  for (int64 t = 1; 2 * t < c; ++t) {
    if ((t & 511) == 0) ph = std::polar(1.0, ang * double(t));
    int64 w = int64(cnt[t]) + int64(cnt[c - t]);
    if (w) re += double(w) * ph.real();
    ph *= rot;
  }
  return re;
}

std::mutex g_fftw_mutex;

}  // namespace

std::shared_ptr<const std::vector<int64>> inverse_table(int64 c) {
  if (c < 1) throw std::domain_error("inverse_table: modulus must be >= 1");
  if (c > (int64(1) << 31)) throw std::domain_error("inverse_table: modulus exceeds 2^31");
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_inverse_cache.find(c);
    if (it != g_inverse_cache.end()) return it->second;
  }
  auto tab = build_inverse_table(c);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_inverse_cache.find(c);
  if (it != g_inverse_cache.end()) return it->second;
  if (g_cache_elements + c <= kCacheElementCap) {
    g_inverse_cache.emplace(c, tab);
    g_cache_elements += c;
  }
  return tab;
}

void clear_inverse_cache() {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_inverse_cache.clear();
  g_cache_elements = 0;
}

double kloosterman_sum(const KloostermanQuery& q) {
  return kloosterman_sum(q.m, q.n, q.c);
}

double kloosterman_sum(int64 m, int64 n, int64 c) {
  if (c < 1) throw std::domain_error("kloosterman_sum: modulus must be >= 1");
  if (c == 1) return 1.0;  // the one residue x = 0 counts as a unit mod 1
  auto tab = inverse_table(c);
  int64 mr = m % c;
  if (mr < 0) mr += c;
  int64 nr = n % c;
  if (nr < 0) nr += c;
  // Swapping m and n permutes the terms by x -> x*, so the histogram inside,
  // and hence the sum, is bit-for-bit symmetric in (m, n).
  return histogram_eval(mr, nr, c, *tab);
}

double kloosterman_sum_uncached(int64 m, int64 n, int64 c) {
  if (c < 1)
    throw std::domain_error("kloosterman_sum_uncached: modulus must be >= 1");
  if (c == 1) return 1.0;
  // Twisted multiplicativity: for c = PQ with (P, Q) = 1,
  //   S(m, n; PQ) = S(m Q*, n Q*; P) S(m P*, n P*; Q),
  // which follows from 1/(PQ) = Q*/P + P*/Q mod 1.  Factoring into prime
  // powers caps the histogram work at the largest prime-power divisor, and
  // nothing is cached, so long c-sweeps that visit each modulus once do not
  // churn the shared table cache.
  thread_local std::vector<int64> local_tab;
  double out = 1.0;
  for (const auto& [p, e] : arith::factorize(c)) {
    int64 pp = 1;
    for (int i = 0; i < e; ++i) pp *= p;
    int64 q = c / pp;
    int64 qinv = (q == 1) ? 1 : *arith::mod_inverse(q % pp, pp);
    int64 mr = ((m % pp) * qinv) % pp;
    if (mr < 0) mr += pp;
    int64 nr = ((n % pp) * qinv) % pp;
    if (nr < 0) nr += pp;
    if (pp <= (int64(1) << 14)) {
      out *= histogram_eval(mr, nr, pp, *inverse_table(pp));
    } else {
      if (pp > (int64(1) << 31))
        throw std::domain_error(
            "kloosterman_sum_uncached: prime-power factor above 2^31");
      fill_inverse_table(pp, local_tab);
      out *= histogram_eval(mr, nr, pp, local_tab);
    }
  }
  return out;
}

std::vector<double> kloosterman_all(int64 l, int64 q) {
  if (q < 1) throw std::domain_error("kloosterman_all: modulus must be >= 1");
  if (q == 1) return {1.0};
  auto tab = inverse_table(q);
  const auto& inv = *tab;
  int64 lr = l % q;
  if (lr < 0) lr += q;

  std::vector<std::complex<double>> a(q, 0.0), out(q);
  for (int64 y = 1; y < q; ++y) {
    int64 yi = inv[y];
    if (yi == 0) continue;
    a[y] = arith::unit_phase_frac(lr * yi, q);
  }
  {
    // planning is not thread-safe; execution of a fresh plan is
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(q), reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  std::vector<double> kl(q);
  double phi = double(arith::euler_phi(q));
  for (int64 r = 0; r < q; ++r) {
    if (std::abs(out[r].imag()) > 1e-9 * std::max(phi, 1.0) + 1e-9 * double(q))
      throw std::runtime_error("kloosterman_all: imaginary part exceeds tolerance");
    kl[r] = out[r].real();
  }
  return kl;
}

bool royer_vanishing_holds(const KloostermanQuery& q, int64 p) {
  if (!arith::is_prime(p)) throw std::domain_error("royer_vanishing_holds: p must be prime");
  return q.c % (p * p) == 0 && q.m % p == 0 && q.n % p != 0;
}

bool royer_vanishing(int64 m, int64 n, int64 c) {
  for (auto& [p, e] : arith::factorize(c)) {
    if (e < 2) continue;
    bool pm = (m % p == 0), pn = (n % p == 0);
    if (pm != pn) return true;
  }
  return false;
}

double weil_bound(int64 m, int64 n, int64 c) {
  double tau = double(arith::divisors(c).size());
  int64 g = std::gcd(std::gcd(std::abs(m), std::abs(n)), c);
  if (g == 0) g = c;
  return tau * std::sqrt(double(g)) * std::sqrt(double(c));
}

double weil_bound_analytic(int64 m, int64 n, int64 c) {
  int64 g = std::gcd(std::gcd(std::abs(m), std::abs(n)), c);
  if (g == 0) g = c;
  return 3.54 * std::cbrt(double(c)) * std::sqrt(double(g)) * std::sqrt(double(c));
}

double divisor_sum_bound(double x) {
  if (x < 1.0) return 0.0;
  return x * (std::log(x) + 1.0);
}

}  // namespace momentlab::kloosterman
