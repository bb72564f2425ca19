#pragma once

#include "hjselect/flux.hpp"
#include "hjselect/grid.hpp"

namespace hjselect {

// Pins the additive constant of the potential. The anchor must sit in a
// region where the conserved field stays equal to `state` for the whole run;
// the potential at the anchor then advances linearly as u0_value + t H(state).
struct CorrespondenceAnchor {
    double x = 0.0;
    double state = 0.0;
    double u0_value = 0.0;
};

// Conserved field (cell averages) -> potential (node values, one more column)
// by cumulative integration from the anchor node: u_x = -v, and u at the
// anchor advances at rate H(state). Throws AnchorInvaded if the cells next to
// the anchor ever differ from the anchor state by more than 1e-8.
GridSolution cl_to_hj(const GridSolution& v, const CorrespondenceAnchor& anchor,
                      const PiecewiseCubicFlux& flux);

// Potential (node values) -> conserved field (cell averages, one fewer
// column) by exact differencing: v = -du/dx.
GridSolution hj_to_cl(const GridSolution& u);

}  // namespace hjselect
