#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hjselect/errors.hpp"

namespace hjselect {

enum class GridKind { cell_average, nodal };

// Space-time table of one scalar field. Rows are stored time slices (not
// necessarily uniformly spaced); columns are cells or nodes of a uniform
// spatial grid.
struct GridSolution {
    GridKind kind = GridKind::cell_average;
    double x_min = 0.0;  // left domain edge (not the first cell center)
    double dx = 0.0;
    std::vector<double> times;  // strictly increasing
    std::size_t columns = 0;
    std::vector<double> data;  // times.size() * columns, row-major

    std::size_t slices() const { return times.size(); }

    double x_at(std::size_t j) const {
        return kind == GridKind::cell_average ? x_min + (static_cast<double>(j) + 0.5) * dx
                                              : x_min + static_cast<double>(j) * dx;
    }
    double x_max() const {
        return kind == GridKind::cell_average ? x_min + static_cast<double>(columns) * dx
                                              : x_min + static_cast<double>(columns - 1) * dx;
    }

    double at(std::size_t it, std::size_t j) const { return data[it * columns + j]; }
    double& at(std::size_t it, std::size_t j) { return data[it * columns + j]; }
    const double* slice(std::size_t it) const { return data.data() + it * columns; }

    // Index of the stored slice closest to t; error if none is within tol.
    std::size_t slice_near(double t, double tol = 1e-9) const {
        std::size_t best = 0;
        double gap = std::abs(times[0] - t);
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double g = std::abs(times[i] - t);
            if (g < gap) { gap = g; best = i; }
        }
        if (gap > tol) throw ConfigError("grid: no stored slice near requested time");
        return best;
    }

    // Piecewise-linear interpolation in x on one stored slice, clamped to the
    // end columns.
    double sample_slice(std::size_t it, double x) const {
        const double s = (x - x_at(0)) / dx;
        if (s <= 0.0) return at(it, 0);
        if (s >= static_cast<double>(columns - 1)) return at(it, columns - 1);
        const std::size_t j = static_cast<std::size_t>(s);
        const double w = s - static_cast<double>(j);
        return at(it, j) * (1.0 - w) + at(it, j + 1) * w;
    }

    // Bilinear sample: linear in t between the bracketing stored slices,
    // linear in x within each. Clamped at the time ends.
    double sample(double t, double x) const {
        if (times.empty()) throw ConfigError("grid: empty");
        if (t <= times.front()) return sample_slice(0, x);
        if (t >= times.back()) return sample_slice(times.size() - 1, x);
        std::size_t hi = 1;
        while (times[hi] < t) ++hi;
        const double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
        return sample_slice(hi - 1, x) * (1.0 - w) + sample_slice(hi, x) * w;
    }
};

}  // namespace hjselect
