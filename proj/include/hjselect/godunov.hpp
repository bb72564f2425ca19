#pragma once

#include <cstddef>
#include <vector>

#include "hjselect/flux.hpp"
#include "hjselect/grid.hpp"
#include "hjselect/profile.hpp"

namespace hjselect {

// Exact Riemann flux for a scalar conservation law: min of the flux over
// [vl, vr] if vl <= vr, max over [vr, vl] otherwise. Extrema are found by
// enumerating segment endpoints and critical points, not by sampling.
double godunov_flux(const PiecewiseCubicFlux& flux, double vl, double vr);

// max |H'| over [lo, hi], by the same exact enumeration.
double max_wave_speed(const PiecewiseCubicFlux& flux, double lo, double hi);

struct GodunovResult {
    GridSolution grid;  // cell averages at the requested output times
    double dt = 0.0;    // base step (individual steps shrink to land on outputs)
    std::size_t steps = 0;
    double max_speed = 0.0;   // wave speed bound used for the CFL condition
    double mass_drift = 0.0;  // |total mass change - boundary flux integral|
    double min_seen = 0.0, max_seen = 0.0;  // over stored slices
};

// First-order Godunov scheme with copy (outflow) boundaries. The domain must
// be padded so that no wave reaches the edges before t_max; boundary cells
// are checked every step and UnpaddedDomain is thrown if they drift by more
// than 1e-10. output_times must be increasing, within [0, t_max]; steps are
// shortened to land on each exactly.
GodunovResult godunov_solve(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                            double x_min, double x_max, std::size_t cells, double t_max,
                            double cfl, const std::vector<double>& output_times);

}  // namespace hjselect
