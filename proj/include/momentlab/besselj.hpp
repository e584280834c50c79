#pragma once

// Bessel J of odd integer order (the weight-side kernel of the trace
// formula) by two independent routes: a composite direct evaluation and a
// Mellin-Barnes contour integral.  Agreement between the two is one of the
// standing cross-checks.

namespace momentlab::besselj {

// J_order(y) for order >= 0, y >= 0.  Composite scheme:
//   y <= 18   alternating power series in extended precision,
//   y <= 60   Miller backward recurrence normalised by J_0 + 2 sum J_{2j} = 1,
//   y  > 60   Hankel asymptotic expansion (absolute error ~1e-9 or better).
double bessel_j(int order, double y);

// Same value through the Barnes integral
//   J_{2 lambda - 1}(y) = 1/(4 pi i) int_{(delta)} G(s) (y/2)^{-s} ds,
//   G(s) = Gamma(lambda - 1/2 + s/2) / Gamma(lambda + 1/2 - s/2),
// for 2*lambda - 1 = order.  delta must lie strictly inside (1 - 2 lambda, 0);
// the contour is shifted internally to the deep edge of that strip, which is
// legitimate because the integrand has no poles in the strip and vanishes on
// horizontal segments.  Target absolute accuracy ~1e-9.
double bessel_j_mellin_barnes(double lambda, double y, double delta);

}  // namespace momentlab::besselj
