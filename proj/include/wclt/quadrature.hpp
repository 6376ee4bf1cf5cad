#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace wclt {

// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

// Adaptive bisection with nested Gauss rules (G7 vs G15 error estimate).
// Throws QuadratureFailure when the interval budget is exhausted.
std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double abs_tol,
                                        int max_intervals = 20000);
double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_intervals = 20000);

// Semicircle-weighted integral  int_{-2}^{2} f(x) rho_sc(x) dx  by the
// Chebyshev (second kind) rule x_i = 2cos(i pi/(n+1)), doubling n until the
// requested absolute tolerance is met.
std::complex<double> integrate_semicircle(const std::function<std::complex<double>(double)>& f,
                                          double abs_tol = 1e-10, int n_start = 64,
                                          int n_max = 1 << 16);

}  // namespace wclt
