#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hjselect/flux.hpp"
#include "hjselect/front_tracking.hpp"
#include "hjselect/grid.hpp"
#include "hjselect/profile.hpp"

namespace hjselect {

// ---- mollifier kernel ------------------------------------------------------

// Unit bump: normalization * exp(1/(s^2-1)) on (-1, 1), zero outside, with
// the constant chosen so the integral is 1. All derivatives vanish at the
// endpoints.
double bump_kernel(double s);
double bump_kernel_deriv(double s);         // eta'(s) = eta(s) * (-2s)/(s^2-1)^2
double bump_kernel_second_deriv(double s);  // eta''(s) = eta(s) * (g^2 + g'), g as above

// The constant in front of the bump, 1 / integral of exp(1/(s^2-1)).
// Computed once by adaptive quadrature.
double bump_normalization();

// ---- mollified velocity fields ---------------------------------------------

using SpaceTimeFn = std::function<double(double t, double x)>;

// A potential profile f convolved in space with the epsilon-scaled bump,
// and the induced velocity field b = -H'(d/dx f_eps). Exactly one backend
// is populated:
//   * `base`: arbitrary space-time callable; every evaluation is an adaptive
//     quadrature against the kernel (or its derivatives).
//   * `table`: nodal space-time grid. The convolution of its piecewise-linear
//     interpolant with the kernel is a fixed-stencil sum, so the smoothed
//     value and its first two space derivatives are tabulated once per slice
//     and sampled bilinearly afterwards.
// Queries must stay at least epsilon away from a table's spatial edges; the
// constant extension beyond them would silently flatten the gradient.
struct MollifiedField {
    double epsilon = 0.0;
    double normalization = 0.0;  // bump_normalization(), stored for inspection
    double lip = 0.0;            // spatial Lipschitz bound of the base profile
    PiecewiseCubicFlux flux;

    SpaceTimeFn base;
    std::shared_ptr<const GridSolution> table;
    std::shared_ptr<const GridSolution> smoothed;    // f_eps at the table nodes
    std::shared_ptr<const GridSolution> grad_table;  // d/dx f_eps
    std::shared_ptr<const GridSolution> curv_table;  // d2/dx2 f_eps

    double mollified(double t, double x) const;
    double gradient(double t, double x) const;
    double curvature(double t, double x) const;
};

// Generic backend. `lip` must bound |f(t,x)-f(t,y)| / |x-y|; it caps the
// gradient range over which wave speeds are taken.
MollifiedField mollify_profile(SpaceTimeFn f, double lip, double epsilon,
                               const PiecewiseCubicFlux& flux);

// Tabulated backend; the Lipschitz bound is measured from the table.
MollifiedField mollify_profile(std::shared_ptr<const GridSolution> f, double epsilon,
                               const PiecewiseCubicFlux& flux);

// b_eps = -H'(d/dx f_eps) and its space derivative.
double velocity_field(const MollifiedField& field, double t, double x);
double velocity_gradient(const MollifiedField& field, double t, double x);

// ---- flow-map ensembles ----------------------------------------------------

struct FlowEnsemble {
    std::vector<double> starts;
    double dt = 0.0;
    double epsilon = 0.0;
    std::vector<double> times;  // step times from 0, last equals t_max
    // [member][step], aligned with `times`
    std::vector<std::vector<double>> trajectories;
    std::vector<std::vector<double>> jacobian_dets;
    std::vector<std::vector<double>> div_integrals;  // running integral of div b along the member
};

// RK4 on the coupled system dX = b dt, dJ = (d/dx b) J dt, J(0) = 1, plus
// the running divergence integral (so the log-Jacobian identity can be
// checked without re-quadrature). Every step is also taken as two half
// steps; the halved result is kept, and a disagreement beyond 1e-6 in
// position or Jacobian raises StepTooLarge. ConfigError if dt exceeds the
// probe-estimated stability bound epsilon / (10 max|d/dx b|), or if a
// Jacobian determinant leaves (0, inf).
FlowEnsemble integrate_flow(const MollifiedField& field, const std::vector<double>& starts,
                            double t_max, double dt);

// ---- the straight-line comparison flow -------------------------------------

// W(t, x) = x - t H'(g(x)) for the initial gradient profile g = u0'. Exact;
// no mollification involved. Injective only while t < w_flow_horizon.
double w_flow(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& u0_grad,
              double t, double x);

// 1 / Lip(x -> H'(g(x))): per linear piece of g the rate is |slope| times
// max|H''| over the piece's value range, maximized by exact enumeration
// (H'' is piecewise linear). Infinity when g is flat.
double w_flow_horizon(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& u0_grad);

// ---- diagnostics -----------------------------------------------------------

// c convention: the caller passes the one-sided constant of the field,
//   c = (max second difference of f) * max|H''| = 2 * semiconcavity_constant(f) * max|H''|,
// the factor 2 bridging the "c|x|^2 - f convex" normalization used by the
// regularity module to the one-sided Lipschitz constant the flow bounds
// actually involve. With that c the linear equality case b = -kx carries
// c = k and meets the determinant bound exactly.
struct FlowDiagnostics {
    bool det_bound_ok = true;
    double det_margin = 0.0;  // min over samples of e^{ct} - 1/J (0 when the bound is tight)
    bool repulsion_ok = true;
    double repulsion_kappa = 0.0;  // worst fitted exponent: log(sep0/sep) / (c t), shrinking pairs only
    double monotone_up_along_W = 0.0;    // most negative step change of (f-u)(t, W(t, x0))
    double monotone_down_along_X = 0.0;  // most positive step change of (f-u)(t, X(t))
    double c_used = 0.0;
};

// Checks, over the stored ensemble:
//   (i)  1/J <= e^{ct} (1 + 1e-6) everywhere;
//   (ii) pair separations never fall below their initial value times
//        e^{-c t kappa} with kappa <= 1 + 1e-6 (the fitted kappa is reported
//        either way; expanding pairs impose nothing);
//   (iii) (f-u)(t, W(t, x0)) per-step monotonicity, evaluated only while
//         t < w_flow_horizon (the straight-line flow stops being a
//         characteristic at the first crossing);
//   (iv) (f-u)(t, X(t)) per-step monotonicity along trajectories, reported
//        over the full run.
// f and u must be evaluable on the swept region. ConfigError if c <= 0.
FlowDiagnostics flow_diagnostics(const FlowEnsemble& ens, const SpaceTimeFn& f,
                                 const SpaceTimeFn& u, const PiecewiseCubicFlux& flux,
                                 const PiecewiseLinearProfile& u0_grad, double c);

// ---- integral residual -----------------------------------------------------

// sup over stored times of |x(t) - x(0) - integral of b(s, x(s)) ds| with
// trapezoid quadrature on the stored steps. Nodes where b throws are
// dropped and the trapezoid spans the gap (the limit field is undefined on
// the shocks themselves; the trajectories of interest only graze them).
double integral_residual(const std::vector<double>& times, const std::vector<double>& positions,
                         const SpaceTimeFn& b_limit);

// True if x is within `radius` of a tracked curve alive at time t.
bool within_shock_tube(const FrontTrackedSolution& sol, double t, double x, double radius);

}  // namespace hjselect
