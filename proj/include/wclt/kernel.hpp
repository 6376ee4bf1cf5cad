#pragma once

#include <complex>
#include <vector>

namespace wclt {

// Covariance kernel u on [-2,2]^2. Normalization calibrated so that
//   m_GUE[1|2] = (1/2) int int (x-z_1)^{-2} (y-z_2)^{-2} u(x,y) dx dy
// and the macroscopic one-function variance comes out as
//   sc[f|g] = (1/2) int int f'(x) g'(y) u(x,y) dx dy.
// Log-singular on the diagonal x = y, non-negative, symmetric.
double kernel_u(double x, double y);

// Same kernel in angle variables x = 2cos(theta), y = 2cos(phi):
//   u = (1/pi^2) ln| sin((theta+phi)/2) / sin((theta-phi)/2) |.
double kernel_u_theta(double theta, double phi);

// Secondary oracle: direct numerical integration of the w-integral form of
// the kernel (up to its overall constant, fixed once against kernel_u).
double kernel_u_wform(double x, double y, double abs_tol = 1e-10);

// m_GUE[S_1|S_2] through the kernel double integral. Multiset sizes <= 3.
std::complex<double> integral_rep_m_gue(const std::vector<std::complex<double>>& zs1,
                                        const std::vector<std::complex<double>>& zs2,
                                        double abs_tol = 1e-7);

}  // namespace wclt
