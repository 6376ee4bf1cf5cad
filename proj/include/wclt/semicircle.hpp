#pragma once

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

namespace wclt {

using cplx = std::complex<double>;

// Scalar calculus of the semicircle law: Stieltjes transform m(z) solving
// -1/m = m + z with sign(Im m) = sign(Im z), its derivatives, the two-body
// stability factor m_i m_j / (1 - m_i m_j), and iterated divided differences
// of m over multi-sets of spectral parameters (confluent via derivatives).

// A spectral parameter with cached m(z) and m'(z).
struct SpectralPoint {
    cplx z{};
    cplx m{};
    cplx m_prime{};

    static SpectralPoint at(cplx z);
};

// rho_sc(x) = sqrt(4-x^2)/(2 pi) on [-2,2], 0 outside.
double semicircle_density(double x);

// Branch-selected solution of m^2 + z m + 1 = 0. Throws ValidationError for real z.
cplx stieltjes(cplx z);

// m, m', ..., m^(order) at z via the differentiated Dyson equation.
// order <= 12; higher orders are out of desk scale and throw.
std::vector<cplx> stieltjes_derivatives(cplx z, int order);

// q_{i,j} = m_i m_j / (1 - m_i m_j); q_{j,j} = m_j' when the points coincide.
// Throws NearSingularStability when |1 - m_i m_j| <= threshold.
cplx stability_factor(const SpectralPoint& p, const SpectralPoint& q,
                      double threshold = 1e-14);

// Iterated divided difference m[z_1,...,z_k] over a multi-set, permutation
// invariant, confluent entries handled through m^(n)/n!.
cplx divided_difference(std::span<const cplx> zs);
cplx divided_difference(const std::vector<cplx>& zs);

// Generic confluent divided-difference table for samples f(z_i) of any
// function with derivative data: used by tests and the covariance closed forms.
// `eval(z, n)` must return f^(n)(z)/n!.
template <typename Eval>
cplx confluent_divided_difference(std::vector<cplx> zs, Eval&& eval) {
    std::sort(zs.begin(), zs.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    const int k = static_cast<int>(zs.size());
    // Newton table over contiguous ranges of the sorted list.
    std::vector<std::vector<cplx>> t(k, std::vector<cplx>(k));
    for (int i = 0; i < k; ++i) t[i][i] = eval(zs[i], 0);
    for (int len = 1; len < k; ++len) {
        for (int i = 0; i + len < k; ++i) {
            int j = i + len;
            if (zs[i] == zs[j]) {
                t[i][j] = eval(zs[i], len);
            } else {
                t[i][j] = (t[i + 1][j] - t[i][j - 1]) / (zs[j] - zs[i]);
            }
        }
    }
    return t[0][k - 1];
}

}  // namespace wclt
