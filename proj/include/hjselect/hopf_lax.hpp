#pragma once

#include <functional>

#include "hjselect/flux.hpp"

namespace hjselect {

struct HopfLaxOptions {
    double y_lo = 0.0, y_hi = 0.0;  // search window for the optimal foot
    double p_lo = 0.0, p_hi = 0.0;  // gradient bracket for the conjugate
    double tol = 1e-9;
    int coarse_points = 257;  // scan resolution before golden refinement
};

// Variational reference value for the potential equation u_t = H(-u_x):
//   u(t, x) = sup_y [ u0(y) - t H*((x - y)/t) ],
// H* the convex conjugate of the flux over [p_lo, p_hi]. Valid when the flux
// is convex on the gradient bracket (NonConcaveObjective otherwise) and u0
// has slopes within it. Throws SearchIntervalTooSmall if the maximizing foot
// lands on the edge of [y_lo, y_hi].
double hopf_lax_eval(const PiecewiseCubicFlux& flux, const std::function<double(double)>& u0,
                     double t, double x, const HopfLaxOptions& opt);

}  // namespace hjselect
