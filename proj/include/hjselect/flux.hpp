#pragma once

#include <cstddef>
#include <vector>

#include "hjselect/util.hpp"

namespace hjselect {

// One cubic piece, c3 p^3 + c2 p^2 + c1 p + c0, evaluated by Horner.
struct CubicSegment {
    double c3 = 0.0, c2 = 0.0, c1 = 0.0, c0 = 0.0;

    double value(double p) const { return ((c3 * p + c2) * p + c1) * p + c0; }
    double deriv(double p) const { return (3.0 * c3 * p + 2.0 * c2) * p + c1; }
    double second_deriv(double p) const { return 6.0 * c3 * p + 2.0 * c2; }
};

// Piecewise cubic flux on the whole line. Segment i covers
// (breakpoints[i-1], breakpoints[i]]; evaluation at a breakpoint uses the
// segment to its left. segments.size() == breakpoints.size() + 1.
struct PiecewiseCubicFlux {
    std::vector<double> breakpoints;  // strictly increasing
    std::vector<CubicSegment> segments;
    int smoothness = 0;  // highest derivative order matched at every breakpoint

    std::size_t segment_index(double p) const;
    double value(double p) const { return segments[segment_index(p)].value(p); }
    double deriv(double p) const { return segments[segment_index(p)].deriv(p); }
    double second_deriv(double p) const { return segments[segment_index(p)].second_deriv(p); }

    // order 0, 1 or 2; anything else is a ConfigError.
    double eval(double p, int order) const;
};

// The non-convex counterexample flux: p^2/2 on [-1/2, 1/2], matched C^2 to
// mirrored cubic branches outside. Even, with humps near +-1.02 and
// inflections at +-19/30. All coefficients are dyadic, so evaluation is
// exactly symmetric in floating point.
PiecewiseCubicFlux counterexample_flux();

// Plain p^2/2, single segment. The convex control.
PiecewiseCubicFlux quadratic_flux();

struct ConvexityReport {
    bool is_convex = false;
    std::vector<double> inflection_points;  // sign changes of the second derivative
    double argmax = 0.0;                    // maximizer of the flux on the interval
    double max_value = 0.0;
    double second_deriv_min = 0.0;
    double second_deriv_max = 0.0;
};

// Exact enumeration (segment endpoints, breakpoints, polynomial roots); no
// sampling involved.
ConvexityReport convexity_report(const PiecewiseCubicFlux& flux, double lo, double hi);

// sup_{p in [p_lo, p_hi]} (q p - flux(p)), by golden section after verifying
// the objective is concave on the bracket (NonConcaveObjective otherwise).
// The sup may be attained at a bracket endpoint; that is legitimate and
// returns the endpoint value.
double legendre_conjugate(const PiecewiseCubicFlux& flux, double q,
                          double p_lo, double p_hi, double tol);

// flux(q) minus the tangent line taken at p, evaluated at q. Negative where
// the graph falls below the tangent.
double tangent_gap(const PiecewiseCubicFlux& flux, double p, double q);

// Diagonal slice g(t) = t^2 + (1-t)^2 + 6 t^2 (1-t)^2 of the quartic pair
// coupling x^2 + y^2 + 6 x^2 y^2. A symmetric double well on [0, 1].
struct DoubleWellReport {
    double barrier_at = 0.0;      // abscissa of the local max between the wells
    double barrier_height = 0.0;  // slice value there
    std::vector<double> minimizers;
    double well_value = 0.0;  // common minimum value
};

// grid_points: resolution of the bracketing scan (>= 8).
DoubleWellReport double_well_slice(int grid_points);

}  // namespace hjselect
