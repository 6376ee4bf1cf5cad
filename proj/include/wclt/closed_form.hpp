#pragma once

#include <string>
#include <vector>

#include "wclt/matrix.hpp"
#include "wclt/testfunction.hpp"

namespace wclt {

using ScaledFn = TestFunction::Scaled;

// sc[i_1,...,i_n] = int prod f_j (x) rho_sc(x) dx
cplx sc_moment(const std::vector<ScaledFn>& fs, double abs_tol = 1e-10);

// sc[..|..] = (1/2) int int (prod fs1)'(x) (prod fs2)'(y) u(x,y) dx dy
cplx sc_cross(const std::vector<ScaledFn>& fs1, const std::vector<ScaledFn>& fs2,
              double abs_tol = 1e-7);

// One audited term of the covariance assembly.
struct AssemblyTerm {
    std::string combinatorial;  // cycle/block notation
    cplx matrix_factor;
    cplx function_factor;
    cplx value;
};

struct CovarianceAssembly {
    cplx annular_sum{};
    cplx marked_sum{};
    cplx total{};
    std::vector<AssemblyTerm> terms;
};

// Limiting covariance E xi(alpha) xi(beta) for kappa_4 = 0: annular sum over
// NCP->(k,l) plus marked-partition-pair sum, with sc cumulants from the
// moment tables. `n_scale` feeds the mesoscopic rescaling f = g(N^gamma(x-E)).
CovarianceAssembly assemble_covariance(const std::vector<TestFunction>& alpha_fs,
                                       const std::vector<MatPtr>& alpha_mats,
                                       const std::vector<TestFunction>& beta_fs,
                                       const std::vector<MatPtr>& beta_mats,
                                       double n_scale = 1.0, double quad_tol = 1e-8);

struct BulkAsymptotics {
    cplx l2_term;      // <prod g_1, prod g_2>_{L^2}
    cplx h_half_term;  // (1/(4 pi^2)) <prod g_1, prod g_2>_{H^{1/2}}
};

// Leading mesoscopic asymptotics of sc[..] and sc[..|..] in terms of the
// unscaled profiles (all functions sharing one gamma > 0 and one center).
BulkAsymptotics bulk_asymptotics(const std::vector<TestFunction>& fs1,
                                 const std::vector<TestFunction>& fs2,
                                 double abs_tol = 1e-9);

}  // namespace wclt
