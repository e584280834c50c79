#include "momentlab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "momentlab/besselj.hpp"
#include "momentlab/kloosterman.hpp"
#include "momentlab/runtime.hpp"

namespace momentlab::trace {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kModulusCeiling = 1.0e8;

void validate(const TraceQuery& q) {
  if (q.m < 1 || q.n < 1)
    throw std::domain_error("trace: indices m, n must be >= 1");
  if (q.k < 2) throw std::domain_error("trace: weight parameter k must be >= 2");
  if (q.level.N < 1)
    throw std::domain_error("trace: level not initialised (use make_level)");
}

// log of zeta_tail(s, J) = sum_{j > J} j^{-s} <= (J+1)^{-s} + (J+1)^{1-s}/(s-1),
// kept in log form so huge k or counts cannot underflow the bound to zero.
double log_zeta_tail(double s, int64 count) {
  double L = std::log(double(count) + 1.0);
  double a = -s * L;
  double b = (1.0 - s) * L - std::log(s - 1.0);
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

double geometric_tail_bound(const TraceQuery& q, int64 count) {
  validate(q);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (count < 1) return inf;
  const double N = double(q.level.N);
  const double A = kTwoPi * std::sqrt(double(q.m) * double(q.n));  // y = 2A/c
  const double lam = 2.0 * q.k - 1.0;
  // first-term majorant needs y <= 2 sqrt(2k) on the whole tail
  if ((double(count) + 1.0) * N * std::sqrt(2.0 * q.k) < A) return inf;
  const double front =
      std::log(kTwoPi) + lam * std::log(A) - std::lgamma(2.0 * q.k);
  // |Kl(m,n;c)| <= c
  const double lt = front - lam * std::log(N) + log_zeta_tail(lam, count);
  // Weil with gcd(m,n,c) <= gcd(m,n)
  const double sw = lam + 1.0 / 6.0;
  const double g0 = double(std::gcd(q.m, q.n));
  const double lw = front + std::log(3.54 * std::sqrt(g0)) -
                    sw * std::log(N) + log_zeta_tail(sw, count);
  return std::exp(std::min(lt, lw));
}

int64 geometric_term_count(const TraceQuery& q, double tail_target) {
  validate(q);
  if (!(tail_target > 0.0))
    throw std::domain_error("geometric_term_count: tail target must be positive");
  const double N = double(q.level.N);
  const double A = kTwoPi * std::sqrt(double(q.m) * double(q.n));
  int64 lo = 0;
  int64 hi = std::max<int64>(
      1, int64(std::ceil(A / (std::sqrt(2.0 * q.k) * N))));
  while (geometric_tail_bound(q, hi) > tail_target) {
    if (double(hi) * N > kModulusCeiling)
      throw std::runtime_error(
          "geometric_term_count: tail target unreachable below c = 1e8");
    lo = hi;
    hi += std::max<int64>(1, hi / 4);
  }
  while (hi - lo > 1) {
    int64 mid = lo + (hi - lo) / 2;
    if (geometric_tail_bound(q, mid) > tail_target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

SeriesValue delta_geometric_truncated(const TraceQuery& q, int64 count) {
  validate(q);
  if (count < 0)
    throw std::domain_error("delta_geometric_truncated: count must be >= 0");
  const int64 N = q.level.N;
  if (count > 0 && double(count) * double(N) > kModulusCeiling)
    throw std::domain_error("delta_geometric_truncated: c range above 1e8");
  const double ybase = 2.0 * kTwoPi * std::sqrt(double(q.m) * double(q.n));
  const int order = 2 * q.k - 1;
  constexpr int64 kBlock = 512;
  const int64 nblocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partial(size_t(nblocks), 0.0);
  auto run_block = [&](int64 b) {
    const int64 j_begin = b * kBlock + 1;
    const int64 j_end = std::min(count, (b + 1) * kBlock);
    double s = 0.0;
    for (int64 j = j_begin; j <= j_end; ++j) {
      const int64 c = j * N;
      const double kl = kloosterman::kloosterman_sum_uncached(q.m, q.n, c);
      s += kl / double(c) * besselj::bessel_j(order, ybase / double(c));
    }
    partial[size_t(b)] = s;
  };
  const int workers =
      int(std::min<int64>(runtime::thread_count(), nblocks));
  if (workers > 1) {
    std::vector<std::future<void>> tasks;
    tasks.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (int64 b = w; b < nblocks; b += workers) run_block(b);
      }));
    for (auto& t : tasks) t.get();
  } else {
    for (int64 b = 0; b < nblocks; ++b) run_block(b);
  }
  double sum = 0.0;
  for (int64 b = 0; b < nblocks; ++b) sum += partial[size_t(b)];
  const double sign = (q.k % 2 == 0) ? 1.0 : -1.0;  // i^{-2k}
  SeriesValue out;
  out.value = cplx((q.m == q.n ? 1.0 : 0.0) + kTwoPi * sign * sum, 0.0);
  out.truncation_bound = geometric_tail_bound(q, count);
  out.terms_used = count;
  return out;
}

SeriesValue delta_geometric(const TraceQuery& q, double tail_target) {
  return delta_geometric_truncated(q, geometric_term_count(q, tail_target));
}

SeriesValue delta_star(const TraceQuery& q, double tail_target) {
  validate(q);
  const arith::Level& L = q.level;
  if (L.nu < 2)
    throw std::domain_error("delta_star: sieve needs level p^nu with nu >= 2");
  if (q.m % L.p == 0 || q.n % L.p == 0) return SeriesValue{};
  const double w = arith::sieve_weight(L).to_double();
  TraceQuery low = q;
  low.level = arith::make_level(L.p, L.nu - 1);
  const SeriesValue a = delta_geometric(q, tail_target / 2.0);
  const SeriesValue b = delta_geometric(low, tail_target * w / 2.0);
  SeriesValue out;
  out.value = a.value - b.value / w;
  out.truncation_bound = a.truncation_bound + b.truncation_bound / w;
  out.terms_used = a.terms_used + b.terms_used;
  return out;
}

namespace {

// Uniform table of J_order with four-point cubic interpolation.  The step
// keeps the interpolation error near 1e-15 absolute, far below the Weil
// tails it sits next to.
struct BesselTable {
  double h = 5.0e-4;
  std::vector<double> val;

  BesselTable(int order, double y_max) {
    const size_t count = size_t(std::ceil(y_max / h)) + 4;
    val.resize(count);
    for (size_t i = 0; i < count; ++i)
      val[i] = besselj::bessel_j(order, double(i) * h);
  }

  double operator()(double y) const {
    double u = y / h;
    auto i = int64(u);
    if (i < 1) i = 1;
    if (i > int64(val.size()) - 3) i = int64(val.size()) - 3;
    const double f = u - double(i);
    const double m0 = 0.5 * (val[size_t(i + 1)] - val[size_t(i - 1)]);
    const double m1 = 0.5 * (val[size_t(i + 2)] - val[size_t(i)]);
    const double d = val[size_t(i + 1)] - val[size_t(i)];
    return val[size_t(i)] +
           f * (m0 + f * ((3.0 * d - 2.0 * m0 - m1) + f * (m0 + m1 - 2.0 * d)));
  }
};

}  // namespace

double GeometricBatch::tail_bound(int64 n) const {
  return geometric_tail_bound(TraceQuery{l, n, k, level}, j_count);
}

double batched_tail_weighted(int64 l, int k, const arith::Level& level,
                             int64 n_max, double weight_exponent,
                             int64 j_count) {
  double s = 0.0;
  for (int64 n = 1; n <= n_max; ++n) {
    s += std::pow(double(n), -weight_exponent) *
         geometric_tail_bound(TraceQuery{l, n, k, level}, j_count);
    if (std::isinf(s)) return s;
  }
  return s;
}

int64 batched_count_for(int64 l, int k, const arith::Level& level,
                        int64 n_max, double weight_exponent, double target) {
  if (!(target > 0.0))
    throw std::domain_error("batched_count_for: tail target must be positive");
  const double N = double(level.N);
  const double A = kTwoPi * std::sqrt(double(l) * double(n_max));
  int64 lo = 0;
  int64 hi =
      std::max<int64>(1, int64(std::ceil(A / (std::sqrt(2.0 * k) * N))));
  while (batched_tail_weighted(l, k, level, n_max, weight_exponent, hi) >
         target) {
    if (double(hi) * N > kModulusCeiling)
      throw std::runtime_error(
          "batched_count_for: tail target unreachable below c = 1e8");
    lo = hi;
    hi += std::max<int64>(1, hi / 4);
  }
  while (hi - lo > 1) {
    int64 mid = lo + (hi - lo) / 2;
    if (batched_tail_weighted(l, k, level, n_max, weight_exponent, mid) >
        target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

GeometricBatch batched_geometric(int64 l, int k, const arith::Level& level,
                                 int64 n_max, int64 j_count) {
  validate(TraceQuery{l, 1, k, level});
  if (n_max < 1)
    throw std::domain_error("batched_geometric: n_max must be >= 1");
  if (j_count < 0)
    throw std::domain_error("batched_geometric: j_count must be >= 0");
  const int64 N = level.N;
  if (j_count > 0 && double(j_count) * double(N) > kModulusCeiling)
    throw std::domain_error("batched_geometric: c range above 1e8");

  GeometricBatch out;
  out.l = l;
  out.k = k;
  out.level = level;
  out.j_count = j_count;
  out.csum.assign(size_t(n_max), 0.0);
  if (j_count == 0) return out;

  const int order = 2 * k - 1;
  std::vector<double> arg(size_t(n_max), 0.0);
  for (int64 n = 1; n <= n_max; ++n)
    arg[size_t(n - 1)] = 2.0 * kTwoPi * std::sqrt(double(l) * double(n));
  const BesselTable table(order, arg.back() / double(N));

  constexpr int64 kBlock = 512;
  const int64 nblocks = (j_count + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial;
  partial.resize(size_t(nblocks));
  auto run_block = [&](int64 b) {
    const int64 j_begin = b * kBlock + 1;
    const int64 j_end = std::min(j_count, (b + 1) * kBlock);
    std::vector<double> part(size_t(n_max), 0.0);
    for (int64 j = j_begin; j <= j_end; ++j) {
      const int64 c = j * N;
      const std::vector<double> row = kloosterman::kloosterman_all(l, c);
      const double invc = 1.0 / double(c);
      int64 r = 1 % c;
      for (int64 n = 1; n <= n_max; ++n) {
        part[size_t(n - 1)] +=
            row[size_t(r)] * invc * table(arg[size_t(n - 1)] * invc);
        if (++r == c) r = 0;
      }
    }
    partial[size_t(b)] = std::move(part);
  };
  const int workers = int(std::min<int64>(runtime::thread_count(), nblocks));
  if (workers > 1) {
    std::vector<std::future<void>> tasks;
    tasks.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w)
      tasks.push_back(std::async(std::launch::async, [&, w] {
        for (int64 b = w; b < nblocks; b += workers) run_block(b);
      }));
    for (auto& t : tasks) t.get();
  } else {
    for (int64 b = 0; b < nblocks; ++b) run_block(b);
  }
  for (int64 b = 0; b < nblocks; ++b) {
    const std::vector<double>& part = partial[size_t(b)];
    for (int64 i = 0; i < n_max; ++i) out.csum[size_t(i)] += part[size_t(i)];
  }
  return out;
}

}  // namespace momentlab::trace
