#pragma once

#include <algorithm>
#include <vector>

#include "hjselect/errors.hpp"

namespace hjselect {

// Continuous piecewise-linear function with constant extensions. The only
// admissible discontinuities are at the first and last knot, where the
// extension value may differ from the knot value (used for Riemann data).
struct PiecewiseLinearProfile {
    std::vector<double> knots;   // strictly increasing
    std::vector<double> values;  // one per knot
    double left_value = 0.0;     // value for x < knots.front()
    double right_value = 0.0;    // value for x > knots.back()

    void validate() const {
        if (knots.size() != values.size())
            throw ConfigError("profile: knots and values differ in length");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i - 1] < knots[i]))
                throw ConfigError("profile: knots must be strictly increasing");
    }

    double operator()(double x) const {
        if (knots.empty()) return left_value;
        if (x < knots.front()) return left_value;
        if (x > knots.back()) return right_value;
        const auto it = std::lower_bound(knots.begin(), knots.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - knots.begin());
        if (knots[i] == x) return values[i];
        const double w = (x - knots[i - 1]) / (knots[i] - knots[i - 1]);
        return values[i - 1] + w * (values[i] - values[i - 1]);
    }

    // Exact integral over [a, b] (a <= b): trapezoid on each linear piece.
    double integral(double a, double b) const {
        if (!(a <= b)) throw ConfigError("profile integral: need a <= b");
        // midpoint rule: exact on linear pieces, and immune to the value
        // jumps allowed at the first and last knot
        auto avg = [this](double lo, double hi) {
            return (*this)(0.5 * (lo + hi)) * (hi - lo);
        };
        double total = 0.0;
        double cur = a;
        for (std::size_t i = 0; i < knots.size() && cur < b; ++i) {
            if (knots[i] <= cur) continue;
            const double stop = std::min(knots[i], b);
            total += avg(cur, stop);
            cur = stop;
        }
        if (cur < b) total += avg(cur, b);
        return total;
    }

    // Slope of the piece containing x; ties at a knot go to the left piece.
    // Zero on the constant extensions.
    double slope_at(double x) const {
        if (knots.size() < 2 || x <= knots.front() || x > knots.back()) return 0.0;
        const auto it = std::lower_bound(knots.begin(), knots.end(), x);
        std::size_t i = static_cast<std::size_t>(it - knots.begin());
        if (i == 0) i = 1;
        return (values[i] - values[i - 1]) / (knots[i] - knots[i - 1]);
    }
};

}  // namespace hjselect
