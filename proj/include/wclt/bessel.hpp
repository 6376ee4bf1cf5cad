#pragma once

namespace wclt {

// Bessel function of the first kind J_1: power series for |x| <= 12, Hankel
// asymptotic expansion beyond. Certified in the tests against the quadrature
// identity  int e^{itx} rho_sc(x) dx = J_1(2t)/t.
double bessel_j1(double x);

// J_1(2t)/t with the t -> 0 limit equal to 1.
double bessel_j1_over_t(double t);

}  // namespace wclt
