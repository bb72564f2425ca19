#include "hjselect/flux.hpp"

#include <algorithm>
#include <cmath>

#include "hjselect/errors.hpp"

namespace hjselect {

std::size_t PiecewiseCubicFlux::segment_index(double p) const {
    // first breakpoint >= p; ties at a breakpoint stay with the left segment
    const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), p);
    return static_cast<std::size_t>(it - breakpoints.begin());
}

double PiecewiseCubicFlux::eval(double p, int order) const {
    switch (order) {
        case 0: return value(p);
        case 1: return deriv(p);
        case 2: return second_deriv(p);
        default: throw ConfigError("flux eval: derivative order must be 0, 1 or 2");
    }
}

namespace {

void require_c2(const PiecewiseCubicFlux& flux) {
    for (std::size_t k = 0; k < flux.breakpoints.size(); ++k) {
        const double b = flux.breakpoints[k];
        const auto& l = flux.segments[k];
        const auto& r = flux.segments[k + 1];
        if (l.value(b) != r.value(b) || l.deriv(b) != r.deriv(b) ||
            l.second_deriv(b) != r.second_deriv(b))
            throw NumericalError("flux: segments do not join C2 at a breakpoint");
    }
}

}  // namespace

PiecewiseCubicFlux counterexample_flux() {
    PiecewiseCubicFlux flux;
    flux.breakpoints = {-0.5, 0.5};
    flux.segments = {
        {5.0 / 4.0, 19.0 / 8.0, 15.0 / 16.0, 5.0 / 32.0},    // left branch
        {0.0, 0.5, 0.0, 0.0},                                // p^2/2
        {-5.0 / 4.0, 19.0 / 8.0, -15.0 / 16.0, 5.0 / 32.0},  // right branch
    };
    flux.smoothness = 2;
    require_c2(flux);  // coefficients are dyadic, so the match is exact
    return flux;
}

PiecewiseCubicFlux quadratic_flux() {
    PiecewiseCubicFlux flux;
    flux.segments = {{0.0, 0.5, 0.0, 0.0}};
    flux.smoothness = 2;
    return flux;
}

ConvexityReport convexity_report(const PiecewiseCubicFlux& flux, double lo, double hi) {
    if (!(lo < hi)) throw ConfigError("convexity_report: need lo < hi");

    ConvexityReport rep;
    rep.second_deriv_min = std::numeric_limits<double>::infinity();
    rep.second_deriv_max = -std::numeric_limits<double>::infinity();
    double best = -std::numeric_limits<double>::infinity();
    double best_p = lo;

    auto consider_max = [&](double p) {
        const double v = flux.value(p);
        if (v > best) { best = v; best_p = p; }
    };

    const std::size_t nseg = flux.segments.size();
    for (std::size_t i = 0; i < nseg; ++i) {
        const double seg_lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                     : flux.breakpoints[i - 1];
        const double seg_hi = i + 1 == nseg ? std::numeric_limits<double>::infinity()
                                            : flux.breakpoints[i];
        const double a = std::max(lo, seg_lo);
        const double b = std::min(hi, seg_hi);
        if (a > b) continue;
        const auto& s = flux.segments[i];

        // second derivative is linear on the piece: range from the ends
        rep.second_deriv_min = std::min({rep.second_deriv_min, s.second_deriv(a), s.second_deriv(b)});
        rep.second_deriv_max = std::max({rep.second_deriv_max, s.second_deriv(a), s.second_deriv(b)});

        // interior inflection: root of 6 c3 p + 2 c2
        if (s.c3 != 0.0) {
            const double r = -s.c2 / (3.0 * s.c3);
            if (r > a && r < b && r > lo && r < hi) rep.inflection_points.push_back(r);
        }

        // candidates for the max: piece ends and critical points of the cubic
        consider_max(a);
        consider_max(b);
        if (s.c3 != 0.0) {
            const double disc = 4.0 * s.c2 * s.c2 - 12.0 * s.c3 * s.c1;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                for (double r : {(-2.0 * s.c2 + sq) / (6.0 * s.c3), (-2.0 * s.c2 - sq) / (6.0 * s.c3)}) {
                    if (r > a && r < b) consider_max(r);
                }
            }
        } else if (s.c2 != 0.0) {
            const double r = -s.c1 / (2.0 * s.c2);
            if (r > a && r < b) consider_max(r);
        }
    }

    // a breakpoint where the second derivative changes sign discontinuously
    // also counts as an inflection (cannot happen for C2 fluxes)
    for (std::size_t k = 0; k < flux.breakpoints.size(); ++k) {
        const double b = flux.breakpoints[k];
        if (b <= lo || b >= hi) continue;
        const double dl = flux.segments[k].second_deriv(b);
        const double dr = flux.segments[k + 1].second_deriv(b);
        if ((dl > 0.0 && dr < 0.0) || (dl < 0.0 && dr > 0.0)) rep.inflection_points.push_back(b);
    }

    std::sort(rep.inflection_points.begin(), rep.inflection_points.end());
    rep.is_convex = rep.second_deriv_min >= -1e-12;
    rep.argmax = best_p;
    rep.max_value = best;
    return rep;
}

double legendre_conjugate(const PiecewiseCubicFlux& flux, double q,
                          double p_lo, double p_hi, double tol) {
    if (!(p_lo < p_hi)) throw ConfigError("legendre_conjugate: need p_lo < p_hi");
    if (!(tol > 0.0)) throw ConfigError("legendre_conjugate: need tol > 0");

    const auto rep = convexity_report(flux, p_lo, p_hi);
    if (rep.second_deriv_min < -1e-10)
        throw NonConcaveObjective("legendre_conjugate: flux is not convex on the bracket");

    auto objective = [&](double p) { return q * p - flux.value(p); };
    const double p_star = golden_section_max(objective, p_lo, p_hi, tol);
    return objective(p_star);
}

double tangent_gap(const PiecewiseCubicFlux& flux, double p, double q) {
    return flux.value(q) - (flux.value(p) + flux.deriv(p) * (q - p));
}

DoubleWellReport double_well_slice(int grid_points) {
    if (grid_points < 8) throw ConfigError("double_well_slice: need at least 8 grid points");

    auto g = [](double t) {
        const double s = t * (1.0 - t);
        return t * t + (1.0 - t) * (1.0 - t) + 6.0 * s * s;
    };
    auto g1 = [](double t) { return (4.0 * t - 2.0) + 12.0 * t * (1.0 - t) * (1.0 - 2.0 * t); };
    auto g2 = [](double t) { return 16.0 - 72.0 * t + 72.0 * t * t; };
    // golden section stalls at sqrt(eps) on the abscissa; polish stationary
    // points with Newton on the analytic derivative
    auto polish = [&](double t) {
        for (int k = 0; k < 4; ++k) t -= g1(t) / g2(t);
        return t;
    };

    const int n = grid_points;
    std::vector<double> ts(n), gs(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = static_cast<double>(i) / (n - 1);
        gs[i] = g(ts[i]);
    }

    DoubleWellReport rep;
    for (int i = 1; i + 1 < n; ++i) {
        if (gs[i] < gs[i - 1] && gs[i] <= gs[i + 1]) {
            const double t = golden_section_max([&](double x) { return -g(x); },
                                                ts[i - 1], ts[i + 1], 1e-8);
            rep.minimizers.push_back(polish(t));
        }
    }
    if (rep.minimizers.size() != 2)
        throw NumericalError("double_well_slice: expected exactly two wells");

    rep.well_value = std::min(g(rep.minimizers[0]), g(rep.minimizers[1]));

    rep.barrier_at = polish(golden_section_max(g, rep.minimizers[0], rep.minimizers[1], 1e-8));
    rep.barrier_height = g(rep.barrier_at);
    return rep;
}

}  // namespace hjselect
