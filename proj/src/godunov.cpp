#include "hjselect/godunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hjselect/errors.hpp"

namespace hjselect {

namespace {

// Extremum of the flux over [a, b] (a <= b): check interval ends, breakpoints
// inside, and roots of H' per segment. Exact for piecewise cubics.
template <bool WantMax>
double flux_extremum(const PiecewiseCubicFlux& flux, double a, double b) {
    double best = flux.value(a);
    auto consider = [&](double p) {
        const double v = flux.value(p);
        if (WantMax ? v > best : v < best) best = v;
    };
    consider(b);
    const std::size_t nseg = flux.segments.size();
    for (std::size_t i = 0; i < nseg; ++i) {
        const double seg_lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                     : flux.breakpoints[i - 1];
        const double seg_hi = i + 1 == nseg ? std::numeric_limits<double>::infinity()
                                            : flux.breakpoints[i];
        const double lo = std::max(a, seg_lo);
        const double hi = std::min(b, seg_hi);
        if (lo > hi) continue;
        if (lo > a) consider(lo);
        const auto& s = flux.segments[i];
        if (s.c3 != 0.0) {
            const double disc = 4.0 * s.c2 * s.c2 - 12.0 * s.c3 * s.c1;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double r1 = (-2.0 * s.c2 + sq) / (6.0 * s.c3);
                const double r2 = (-2.0 * s.c2 - sq) / (6.0 * s.c3);
                if (r1 > lo && r1 < hi) consider(r1);
                if (r2 > lo && r2 < hi) consider(r2);
            }
        } else if (s.c2 != 0.0) {
            const double r = -s.c1 / (2.0 * s.c2);
            if (r > lo && r < hi) consider(r);
        }
    }
    return best;
}

}  // namespace

double godunov_flux(const PiecewiseCubicFlux& flux, double vl, double vr) {
    if (vl == vr) return flux.value(vl);
    if (vl < vr) return flux_extremum<false>(flux, vl, vr);
    return flux_extremum<true>(flux, vr, vl);
}

double max_wave_speed(const PiecewiseCubicFlux& flux, double lo, double hi) {
    if (!(lo <= hi)) throw ConfigError("max_wave_speed: need lo <= hi");
    double best = 0.0;
    auto consider = [&](double p) { best = std::max(best, std::abs(flux.deriv(p))); };
    consider(lo);
    consider(hi);
    const std::size_t nseg = flux.segments.size();
    for (std::size_t i = 0; i < nseg; ++i) {
        const double seg_lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                     : flux.breakpoints[i - 1];
        const double seg_hi = i + 1 == nseg ? std::numeric_limits<double>::infinity()
                                            : flux.breakpoints[i];
        const double a = std::max(lo, seg_lo);
        const double b = std::min(hi, seg_hi);
        if (a > b) continue;
        consider(a);
        consider(b);
        const auto& s = flux.segments[i];
        // critical point of H' (root of H'')
        if (s.c3 != 0.0) {
            const double r = -s.c2 / (3.0 * s.c3);
            if (r > a && r < b) consider(r);
        }
    }
    return best;
}

GodunovResult godunov_solve(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                            double x_min, double x_max, std::size_t cells, double t_max,
                            double cfl, const std::vector<double>& output_times) {
    v0.validate();
    if (!(x_min < x_max)) throw ConfigError("godunov_solve: need x_min < x_max");
    if (cells < 4) throw ConfigError("godunov_solve: need at least 4 cells");
    if (!(t_max > 0.0)) throw ConfigError("godunov_solve: need t_max > 0");
    if (!(cfl > 0.0 && cfl < 1.0)) throw ConfigError("godunov_solve: need 0 < cfl < 1");
    for (std::size_t i = 0; i < output_times.size(); ++i) {
        if (output_times[i] < 0.0 || output_times[i] > t_max + 1e-12)
            throw ConfigError("godunov_solve: output time outside [0, t_max]");
        if (i > 0 && !(output_times[i - 1] < output_times[i]))
            throw ConfigError("godunov_solve: output times must be increasing");
    }

    GodunovResult res;
    const double dx = (x_max - x_min) / static_cast<double>(cells);

    std::vector<double> v(cells);
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (std::size_t j = 0; j < cells; ++j) {
        v[j] = v0(x_min + (static_cast<double>(j) + 0.5) * dx);
        vmin = std::min(vmin, v[j]);
        vmax = std::max(vmax, v[j]);
    }
    // include the extension values so the speed bound covers incoming states
    vmin = std::min({vmin, v0.left_value, v0.right_value});
    vmax = std::max({vmax, v0.left_value, v0.right_value});

    res.max_speed = max_wave_speed(flux, vmin, vmax);
    if (res.max_speed <= 0.0) throw NumericalError("godunov_solve: zero wave speed bound");
    res.dt = cfl * dx / res.max_speed;

    res.grid.kind = GridKind::cell_average;
    res.grid.x_min = x_min;
    res.grid.dx = dx;
    res.grid.columns = cells;
    res.min_seen = vmin;
    res.max_seen = vmax;

    const double left0 = v[0], right0 = v[cells - 1];

    // mass ledger, compensated: sum of dt * (F_right - F_left) over steps
    long double boundary_outflow = 0.0L;
    long double mass0 = 0.0L;
    for (double x : v) mass0 += x;

    std::vector<double> flx(cells + 1);

    std::size_t next_out = 0;
    auto maybe_store = [&](double t) {
        while (next_out < output_times.size() && std::abs(output_times[next_out] - t) <= 1e-12) {
            res.grid.times.push_back(output_times[next_out]);
            res.grid.data.insert(res.grid.data.end(), v.begin(), v.end());
            for (double x : v) {
                res.min_seen = std::min(res.min_seen, x);
                res.max_seen = std::max(res.max_seen, x);
            }
            ++next_out;
        }
    };

    double t = 0.0;
    maybe_store(t);
    while (t < t_max - 1e-14) {
        double step = std::min(res.dt, t_max - t);
        if (next_out < output_times.size())
            step = std::min(step, output_times[next_out] - t);

        flx[0] = flux.value(v[0]);
        flx[cells] = flux.value(v[cells - 1]);
        for (std::size_t j = 1; j < cells; ++j) {
            // constant states dominate padded runs; skip the Riemann search
            flx[j] = v[j - 1] == v[j] ? flux.value(v[j]) : godunov_flux(flux, v[j - 1], v[j]);
        }

        const double lambda = step / dx;
        for (std::size_t j = 0; j < cells; ++j) v[j] -= lambda * (flx[j + 1] - flx[j]);
        boundary_outflow += static_cast<long double>(step) * (flx[cells] - flx[0]);

        t += step;
        ++res.steps;

        if (std::abs(v[0] - left0) > 1e-10 || std::abs(v[cells - 1] - right0) > 1e-10)
            throw UnpaddedDomain("godunov_solve: boundary cells drifted; widen the domain");

        maybe_store(t);
    }
    maybe_store(t_max);

    long double mass1 = 0.0L;
    for (double x : v) mass1 += x;
    res.mass_drift = static_cast<double>(std::abs((mass1 - mass0) * static_cast<long double>(dx) +
                                                  boundary_outflow * 1.0L));
    return res;
}

}  // namespace hjselect
