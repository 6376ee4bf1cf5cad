#include "wclt/bessel.hpp"

#include <cmath>

namespace wclt {

namespace {

double j1_series_over_halfx(double x) {
    // J_1(x)/(x/2) = sum_m (-x^2/4)^m / (m! (m+1)!)
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int m = 1; m < 80; ++m) {
        term *= q / (static_cast<double>(m) * (m + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double j1_asymptotic(double x) {
    // DLMF 10.17 with a_k(1) = (4-1)(4-9)...(4-(2k-1)^2)/(k! 8^k)
    const double xi = 1.0 / x;
    const double x2 = xi * xi;
    const double P = 1.0 + x2 * (15.0 / 128.0 + x2 * (-14175.0 / 98304.0 +
                                                      x2 * (127702575.0 / 188743680.0)));
    const double Q = xi * (3.0 / 8.0 + x2 * (-105.0 / 1024.0 +
                                             x2 * (1091475.0 / 3932160.0 +
                                                   x2 * (-21070924875.0 / 10569646080.0))));
    const double w = x - 3.0 * M_PI / 4.0;
    return std::sqrt(2.0 / (M_PI * x)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace

double bessel_j1(double x) {
    const double ax = std::abs(x);
    double v;
    if (ax <= 12.0) {
        v = 0.5 * ax * j1_series_over_halfx(ax);
    } else {
        v = j1_asymptotic(ax);
    }
    return x < 0.0 ? -v : v;  // J_1 is odd
}

double bessel_j1_over_t(double t) {
    const double x = 2.0 * std::abs(t);
    if (x <= 12.0) return j1_series_over_halfx(x);  // even in t, limit 1 at t = 0
    return bessel_j1(x) / std::abs(t);
}

}  // namespace wclt
