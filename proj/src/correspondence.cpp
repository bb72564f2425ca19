#include "hjselect/correspondence.hpp"

#include <cmath>

#include "hjselect/errors.hpp"

namespace hjselect {

GridSolution cl_to_hj(const GridSolution& v, const CorrespondenceAnchor& anchor,
                      const PiecewiseCubicFlux& flux) {
    if (v.kind != GridKind::cell_average) throw ConfigError("cl_to_hj: expected cell averages");
    if (v.columns < 2 || v.times.empty()) throw ConfigError("cl_to_hj: empty grid");

    const std::size_t nodes = v.columns + 1;
    const double pos = (anchor.x - v.x_min) / v.dx;
    const auto ja = static_cast<std::size_t>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(ja)) > 0.25 || ja >= nodes)
        throw ConfigError("cl_to_hj: anchor is not on a grid node");

    GridSolution u;
    u.kind = GridKind::nodal;
    u.x_min = v.x_min;
    u.dx = v.dx;
    u.times = v.times;
    u.columns = nodes;
    u.data.resize(u.times.size() * nodes);

    const double rate = flux.value(anchor.state);
    for (std::size_t it = 0; it < v.times.size(); ++it) {
        const double* row = v.slice(it);
        // the anchor claims to sit in a constant region; verify its flanks
        if (ja > 0 && std::abs(row[ja - 1] - anchor.state) > 1e-8)
            throw AnchorInvaded("cl_to_hj: wave reached the anchor cell");
        if (ja < v.columns && std::abs(row[ja] - anchor.state) > 1e-8)
            throw AnchorInvaded("cl_to_hj: wave reached the anchor cell");

        double* out = u.data.data() + it * nodes;
        const long double u_a = static_cast<long double>(anchor.u0_value) +
                                static_cast<long double>(v.times[it]) * rate;
        out[ja] = static_cast<double>(u_a);
        long double acc = u_a;
        for (std::size_t j = ja; j < v.columns; ++j) {
            acc -= static_cast<long double>(row[j]) * v.dx;
            out[j + 1] = static_cast<double>(acc);
        }
        acc = u_a;
        for (std::size_t j = ja; j-- > 0;) {
            acc += static_cast<long double>(row[j]) * v.dx;
            out[j] = static_cast<double>(acc);
        }
    }
    return u;
}

GridSolution hj_to_cl(const GridSolution& u) {
    if (u.kind != GridKind::nodal) throw ConfigError("hj_to_cl: expected nodal values");
    if (u.columns < 2 || u.times.empty()) throw ConfigError("hj_to_cl: empty grid");

    GridSolution v;
    v.kind = GridKind::cell_average;
    v.x_min = u.x_min;
    v.dx = u.dx;
    v.times = u.times;
    v.columns = u.columns - 1;
    v.data.resize(v.times.size() * v.columns);
    for (std::size_t it = 0; it < u.times.size(); ++it) {
        const double* row = u.slice(it);
        double* out = v.data.data() + it * v.columns;
        for (std::size_t j = 0; j < v.columns; ++j)
            out[j] = -(row[j + 1] - row[j]) / u.dx;
    }
    return v;
}

}  // namespace hjselect
