#pragma once

#include "wclt/closed_form.hpp"
#include "wclt/matrix.hpp"

namespace wclt {

// Predictions for the Heisenberg-evolved overlap <A_1(t) A_2> with traceless
// A_1, A_2 in the kappa_4 = 0 regime: thermal leading term through J_1, and
// the limiting fluctuation variance assembled from the (2,2) covariance.
struct ThermalPrediction {
    double t = 0.0;
    cplx leading{};              // <A_1 A_2> J_1(2t)^2 / t^2
    double variance = 0.0;       // Var xi(t)
    double variance_limit = 0.0; // <|A_1|^2><|A_2|^2>
    int annular_terms = 0;       // non-vanishing annular contributions
    int marked_terms = 0;        // non-vanishing marked-pair contributions
    CovarianceAssembly assembly;
};

ThermalPrediction thermal_prediction(const MatPtr& a1, const MatPtr& a2, double t,
                                     double quad_tol = 1e-8);

// E xi(t_1) conj(xi(t_2)) for the same pair of observables.
cplx thermal_cross_time(const MatPtr& a1, const MatPtr& a2, double t1, double t2,
                        double quad_tol = 1e-8);

}  // namespace wclt
