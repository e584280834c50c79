#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "momentlab/besselj.hpp"
#include "momentlab/gammafun.hpp"
#include "momentlab/zetafun.hpp"

using momentlab::gammafun::cplx;
namespace gf = momentlab::gammafun;
namespace zf = momentlab::zetafun;
namespace bj = momentlab::besselj;

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Independent Bessel oracle: J_m(y) = (1/pi) int_0^pi cos(m theta - y sin
// theta) d theta.  The integrand is entire and periodic, so the trapezoid
// rule converges spectrally; 1 << N makes this exact to long double eps.
long double oracle_bessel(int m, long double y) {
  const int N = 4096;
  const long double pi = 3.14159265358979323846264338327950288L;
  long double h = pi / N;
  long double acc = 0.5L * (cosl(0.0L) + cosl(m * pi - y * sinl(pi)));
  for (int j = 1; j < N; ++j) {
    long double th = j * h;
    acc += cosl(m * th - y * sinl(th));
  }
  return acc * h / pi;
}

// Hurwitz oracle: plain sum with the two leading Euler-Maclaurin closure
// terms, independent of the production evaluator's head/tail balance.
cplx oracle_hurwitz(cplx s, double a) {
  const int M = 20000;
  cplx acc(0.0, 0.0);
  for (int m = 0; m < M; ++m) acc += std::exp(-s * std::log(m + a));
  double q = M + a;
  cplx qs = std::exp(-s * std::log(q));
  return acc + qs * q / (s - 1.0) + 0.5 * qs;
}

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace

TEST_CASE("gamma: pinned values and functional relations") {
  CHECK(rel_err(gf::complex_gamma(cplx(0.5, 0)), cplx(std::sqrt(kPi), 0)) <
        1e-14);
  CHECK(rel_err(gf::complex_gamma(cplx(1, 0)), cplx(1, 0)) < 1e-14);
  CHECK(rel_err(gf::complex_gamma(cplx(5, 0)), cplx(24, 0)) < 1e-14);
  CHECK(rel_err(gf::complex_gamma(cplx(12, 0)), cplx(39916800, 0)) < 1e-13);

  // |Gamma(1+ib)|^2 = pi b / sinh(pi b).
  for (double b : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    double want = std::sqrt(kPi * b / std::sinh(kPi * b));
    CHECK(std::abs(std::abs(gf::complex_gamma(cplx(1.0, b))) - want) <=
          1e-12 * want);
  }

  // Recurrence and reflection across the plane.
  for (double re : {-3.3, -0.7, 0.25, 1.0, 2.5, 17.0, 41.0}) {
    for (double im : {-20.0, -1.5, 0.0, 0.3, 7.0, 60.0}) {
      cplx z(re, im);
      cplx g1 = gf::complex_gamma(z + 1.0);
      cplx g0 = gf::complex_gamma(z);
      CHECK(rel_err(g1, z * g0) < 1e-11);
      if (std::abs(im) > 1e-9 || std::abs(re - std::round(re)) > 1e-9) {
        cplx lhs = g0 * gf::complex_gamma(1.0 - z);
        cplx rhs = kPi / std::sin(kPi * z);
        CHECK(rel_err(lhs, rhs) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS((void)gf::complex_gamma(cplx(0.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS((void)gf::complex_gamma(cplx(-3.0, 0.0)), std::domain_error);
}

TEST_CASE("log_gamma: consistency with gamma in the right half-plane") {
  for (double re : {0.1, 0.8, 3.0, 10.0, 30.0}) {
    for (double im : {-40.0, -2.0, 0.0, 1.0, 15.0}) {
      cplx z(re, im);
      CHECK(rel_err(std::exp(gf::log_gamma(z)), gf::complex_gamma(z)) <
            1e-11);
    }
  }
  CHECK_THROWS_AS((void)gf::log_gamma(cplx(-1.0, 2.0)), std::domain_error);
}

TEST_CASE("digamma: pinned values and recurrence") {
  CHECK(std::abs(gf::digamma(cplx(1, 0)).real() + gf::EULER_GAMMA) < 1e-12);
  double psi_half = -gf::EULER_GAMMA - 2.0 * std::log(2.0);
  CHECK(std::abs(gf::digamma(cplx(0.5, 0)).real() - psi_half) < 1e-12);
  for (double re : {-2.7, 0.3, 1.0, 4.5, 20.0}) {
    for (double im : {-8.0, 0.0, 0.6, 25.0}) {
      cplx z(re, im);
      if (std::abs(im) < 1e-12 && re < 0 &&
          std::abs(re - std::round(re)) < 1e-9)
        continue;
      cplx lhs = gf::digamma(z + 1.0);
      cplx rhs = gf::digamma(z) + 1.0 / z;
      CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST_CASE("riemann zeta: pinned values") {
  CHECK(rel_err(zf::riemann_zeta(cplx(2, 0)), cplx(kPi * kPi / 6.0, 0)) <
        1e-12);
  CHECK(rel_err(zf::riemann_zeta(cplx(4, 0)),
                cplx(kPi * kPi * kPi * kPi / 90.0, 0)) < 1e-12);
  // Apery's constant, 20 digits.
  CHECK(rel_err(zf::riemann_zeta(cplx(3, 0)),
                cplx(1.2020569031595942854, 0)) < 1e-12);
  CHECK(rel_err(zf::riemann_zeta(cplx(0, 0)), cplx(-0.5, 0)) < 1e-12);
  CHECK(rel_err(zf::riemann_zeta(cplx(-1, 0)), cplx(-1.0 / 12.0, 0)) <
        1e-12);
  CHECK(rel_err(zf::riemann_zeta(cplx(0.5, 0)),
                cplx(-1.46035450880958681289, 0)) < 1e-12);
  CHECK_THROWS_AS((void)zf::riemann_zeta(cplx(1.0, 0.0)), std::domain_error);
}

TEST_CASE("hurwitz zeta: oracle agreement in the convergent region") {
  std::vector<cplx> svals = {cplx(2, 0), cplx(3, 0), cplx(2.5, 1.7),
                             cplx(1.8, -4.0), cplx(6.0, 0.3)};
  std::vector<double> avals = {0.1, 1.0 / 3.0, 0.5, 1.0, 1.7, 0.97};
  for (cplx s : svals)
    for (double a : avals)
      CHECK(std::abs(zf::hurwitz_zeta(s, a) - oracle_hurwitz(s, a)) <=
            1e-10 * (1.0 + std::abs(oracle_hurwitz(s, a))));
}

TEST_CASE("hurwitz zeta: continuation, shifts, pinned specials") {
  // zeta(2, 1/2) = pi^2 / 2.
  CHECK(rel_err(zf::hurwitz_zeta(cplx(2, 0), 0.5), cplx(kPi * kPi / 2, 0)) <
        1e-12);
  // zeta(-n, a) = -B_{n+1}(a)/(n+1): for n = 1, -(a^2 - a + 1/6)/2.
  for (double a : {0.3, 0.75, 1.0, 2.2}) {
    double want = -(a * a - a + 1.0 / 6.0) / 2.0;
    CHECK(std::abs(zf::hurwitz_zeta(cplx(-1, 0), a).real() - want) < 1e-12);
    CHECK(std::abs(zf::hurwitz_zeta(cplx(-1, 0), a).imag()) < 1e-13);
  }
  // Forward shift identity zeta(s, a) = a^{-s} + zeta(s, a+1).
  for (double a : {0.2, 0.6, 1.3}) {
    for (cplx s : {cplx(2.3, 1.0), cplx(-0.7, 2.0), cplx(5, 0)}) {
      cplx lhs = zf::hurwitz_zeta(s, a);
      cplx rhs = std::exp(-s * std::log(a)) + zf::hurwitz_zeta(s, a + 1.0);
      CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(lhs)));
    }
  }
  CHECK_THROWS_AS((void)zf::hurwitz_zeta(cplx(1.0, 0.0), 0.5),
                  std::domain_error);
  CHECK_THROWS_AS((void)zf::hurwitz_zeta(cplx(2.0, 0.0), 0.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)zf::hurwitz_zeta(cplx(2.0, 0.0), -1.0),
                  std::domain_error);
}

TEST_CASE("hurwitz zeta family matches pointwise evaluation") {
  cplx z0(1.5, 0.7);
  double a = 0.37;
  auto fam = zf::hurwitz_zeta_family(z0, a, 25);
  REQUIRE(fam.size() == 25);
  for (int j = 0; j < 25; ++j) {
    cplx want = zf::hurwitz_zeta(z0 + double(j), a);
    CHECK(std::abs(fam[j] - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
  auto fam2 = zf::hurwitz_zeta_family(cplx(-0.4, 1.0), 0.9, 6);
  for (int j = 0; j < 6; ++j) {
    cplx want = zf::hurwitz_zeta(cplx(-0.4, 1.0) + double(j), 0.9);
    CHECK(std::abs(fam2[j] - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("lerch zeta: hurwitz reduction, periodicity, rational twist") {
  // Integer beta: value is a Hurwitz value shifted to the first positive
  // argument; (1/2, 0; 2) = pi^2/2 pins the n = 0 inclusion.
  CHECK(rel_err(zf::lerch_zeta(0.5, 0.0, cplx(2, 0)),
                cplx(kPi * kPi / 2, 0)) < 1e-12);
  CHECK(rel_err(zf::lerch_zeta(1.0, 0.0, cplx(2, 0)),
                cplx(kPi * kPi / 6, 0)) < 1e-12);
  // alpha shift invariance (the summation set is shift-stable).
  for (double alpha : {0.25, 0.5, 0.8}) {
    cplx s(1.7, 0.4);
    CHECK(std::abs(zf::lerch_zeta(alpha, 0.0, s) -
                   zf::lerch_zeta(alpha + 1.0, 0.0, s)) < 1e-12);
    CHECK(std::abs(zf::lerch_zeta(alpha, 1.0 / 3.0, s) -
                   zf::lerch_zeta(alpha, 4.0 / 3.0, s)) < 1e-12);
  }
  // Rational beta against the residue-class Hurwitz decomposition:
  // sum_{n>=0} e(nb/q)(n+alpha)^{-s} = q^{-s} sum_r e(rb/q) zeta(s,(r+alpha)/q).
  for (double alpha : {0.25, 0.7}) {
    for (int q : {3, 5}) {
      for (int b = 1; b < q; ++b) {
        cplx s(1.2, 0.0);
        cplx want(0.0, 0.0);
        for (int r = 0; r < q; ++r) {
          double th = 2.0 * kPi * r * b / q;
          want += cplx(std::cos(th), std::sin(th)) *
                  zf::hurwitz_zeta(s, (r + alpha) / q);
        }
        want *= std::exp(-s * std::log(double(q)));
        cplx got = zf::lerch_zeta(alpha, double(b) / q, s);
        CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
      }
    }
  }
  CHECK_THROWS_AS((void)zf::lerch_zeta(0.5, 0.25, cplx(-0.5, 0.0)),
                  std::domain_error);
}

TEST_CASE("lerch functional equation") {
  // Left side zeta(0, alpha; 1-s) through the residue-class Hurwitz
  // decomposition of sum_{n>=1} e(n alpha) n^{-z}, valid by continuation.
  auto lhs_continued = [&](int b, int q, cplx z) {
    cplx acc(0.0, 0.0);
    for (int r = 1; r <= q; ++r) {
      double th = 2.0 * kPi * r * b / q;
      acc += cplx(std::cos(th), std::sin(th)) *
             zf::hurwitz_zeta(z, double(r) / q);
    }
    return acc * std::exp(-z * std::log(double(q)));
  };
  struct Frac { int b, q; };
  for (Frac f : {Frac{1, 5}, Frac{1, 3}, Frac{2, 5}}) {
    for (cplx s : {cplx(2, 0), cplx(3, 0), cplx(2, 1)}) {
      cplx lhs = lhs_continued(f.b, f.q, 1.0 - s);
      cplx rhs = zf::lerch_functional_equation_rhs(double(f.b) / f.q, s);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(lhs)));
    }
  }
  // Integer alpha collapses to the Riemann functional equation.
  cplx rhs = zf::lerch_functional_equation_rhs(1.0, cplx(2, 0));
  CHECK(std::abs(rhs - cplx(-1.0 / 12.0, 0)) < 1e-12);
  CHECK_THROWS_AS((void)zf::lerch_functional_equation_rhs(0.2, cplx(0.5, 0)),
                  std::domain_error);
}

TEST_CASE("bessel j: oracle agreement across the composite ranges") {
  // Orders 2k-1; y covers series, recurrence and asymptotic regions.
  std::vector<double> ys;
  for (int i = 0; i < 20; ++i)
    ys.push_back(0.1 * std::pow(500.0, i / 19.0));  // 0.1 .. 50 log-spaced
  for (int order : {1, 3, 5, 7, 9, 11}) {
    for (double y : ys) {
      double want = (double)oracle_bessel(order, y);
      CHECK(std::abs(bj::bessel_j(order, y) - want) <= 1e-12);
    }
    for (double y : {80.0, 150.0, 400.0}) {
      double want = (double)oracle_bessel(order, y);
      CHECK(std::abs(bj::bessel_j(order, y) - want) <= 2e-9);
    }
  }
  // First positive zero of J_1, 20 digits.
  CHECK(std::abs(bj::bessel_j(1, 3.8317059702075123156)) < 1e-12);
  CHECK(bj::bessel_j(0, 0.0) == 1.0);
  CHECK(bj::bessel_j(3, 0.0) == 0.0);
  // Seam continuity.
  for (double seam : {18.0, 60.0}) {
    double lo = bj::bessel_j(3, seam - 1e-9);
    double hi = bj::bessel_j(3, seam + 1e-9);
    CHECK(std::abs(lo - hi) < 1e-8);
  }
  CHECK_THROWS_AS((void)bj::bessel_j(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)bj::bessel_j(1, -1.0), std::domain_error);
}

TEST_CASE("bessel j: Barnes integral agrees with the direct evaluation") {
  std::vector<double> ys;
  for (int i = 0; i < 20; ++i) ys.push_back(0.1 * std::pow(500.0, i / 19.0));
  for (double lambda : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    int order = int(2 * lambda) - 1;
    double delta = 0.5 * (1.0 - 2.0 * lambda);  // mid-strip request
    for (double y : ys) {
      double direct = bj::bessel_j(order, y);
      double mb = bj::bessel_j_mellin_barnes(lambda, y, delta);
      CHECK(std::abs(mb - direct) <= 1e-8);
    }
  }
  // The requested line position inside the strip cannot change the value.
  double a = bj::bessel_j_mellin_barnes(2.0, 7.0, -0.4);
  double b = bj::bessel_j_mellin_barnes(2.0, 7.0, -2.2);
  CHECK(std::abs(a - b) < 1e-9);
  CHECK_THROWS_AS((void)bj::bessel_j_mellin_barnes(2.0, 1.0, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)bj::bessel_j_mellin_barnes(2.0, 1.0, -3.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)bj::bessel_j_mellin_barnes(2.0, 1.0, 0.3),
                  std::domain_error);
  CHECK_THROWS_AS((void)bj::bessel_j_mellin_barnes(0.4, 1.0, -0.1),
                  std::domain_error);
}
