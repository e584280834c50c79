#pragma once

#include <complex>

// Complex Gamma, log-Gamma and digamma.  Everything downstream (zeta
// continuations, Bessel kernels, moment main terms) routes through these.

namespace momentlab::gammafun {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 6.28318530717958647692528676655900577;
// Euler-Mascheroni constant, 30 digits.
inline constexpr double EULER_GAMMA = 0.577215664901532860606512090082;
inline constexpr double LOG_TWO_PI = 1.83787706640934548356065947281123527;

// Lanczos evaluation, reflection for Re z < 1/2.  Relative error well
// below 1e-12 for |z| <= 50, |Im z| <= 100.  Throws on poles.
cplx complex_gamma(cplx z);

// Principal log-Gamma, restricted to Re z > 0 (all ratio work here keeps
// arguments in the right half-plane, where no branch tracking is needed).
cplx log_gamma(cplx z);

// psi(z) = Gamma'(z)/Gamma(z) by upward recurrence into the asymptotic
// region |z| >= 12.  Relative error <= 1e-10 on the contract domain.
cplx digamma(cplx z);

}  // namespace momentlab::gammafun
