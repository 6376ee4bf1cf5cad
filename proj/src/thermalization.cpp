#include "wclt/thermalization.hpp"

#include <cmath>

#include "wclt/bessel.hpp"
#include "wclt/errors.hpp"

namespace wclt {

namespace {

void require_traceless(const MatPtr& a, const char* who) {
    if (std::abs(a->avg()) > 1e-10)
        throw NotTraceless(std::string(who) + ": observable must be traceless");
}

CovarianceAssembly evolved_pair_covariance(const MatPtr& a1, const MatPtr& a2, double t1,
                                           double t2, double quad_tol) {
    // alpha = (e^{i t1 x} A_1, e^{-i t1 x} A_2),
    // beta  = (e^{i t2 x} A_1^*, e^{-i t2 x} A_2^*)  -- the conjugate mode
    std::vector<TestFunction> afs{{exp_phase(t1), 0.0, 0.0}, {exp_phase(-t1), 0.0, 0.0}};
    std::vector<TestFunction> bfs{{exp_phase(t2), 0.0, 0.0}, {exp_phase(-t2), 0.0, 0.0}};
    std::vector<MatPtr> ams{a1, a2};
    std::vector<MatPtr> bms{a1->adjoint(), a2->adjoint()};
    return assemble_covariance(afs, ams, bfs, bms, 1.0, quad_tol);
}

}  // namespace

ThermalPrediction thermal_prediction(const MatPtr& a1, const MatPtr& a2, double t,
                                     double quad_tol) {
    require_traceless(a1, "thermal_prediction");
    require_traceless(a2, "thermal_prediction");
    ThermalPrediction out;
    out.t = t;
    const double j = bessel_j1_over_t(t);
    out.leading = avg_product(*a1, *a2) * j * j;
    out.assembly = evolved_pair_covariance(a1, a2, t, t, quad_tol);
    out.variance = out.assembly.total.real();
    out.variance_limit =
        (avg_product(*a1, *a1->adjoint()) * avg_product(*a2, *a2->adjoint())).real();
    double scale = 0.0;
    for (const auto& term : out.assembly.terms) scale = std::max(scale, std::abs(term.value));
    const double cut = 1e-10 * std::max(scale, 1.0);
    for (const auto& term : out.assembly.terms) {
        if (std::abs(term.value) <= cut) continue;
        if (term.combinatorial.rfind("pi=", 0) == 0)
            ++out.annular_terms;
        else
            ++out.marked_terms;
    }
    return out;
}

cplx thermal_cross_time(const MatPtr& a1, const MatPtr& a2, double t1, double t2,
                        double quad_tol) {
    require_traceless(a1, "thermal_cross_time");
    require_traceless(a2, "thermal_cross_time");
    return evolved_pair_covariance(a1, a2, t1, t2, quad_tol).total;
}

}  // namespace wclt
