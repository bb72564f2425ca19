#pragma once

// Reference values for the test suite, derived through arithmetic that is
// independent of the library code under test: exact int64 fractions for
// everything rational, closed forms for the handful of algebraic numbers,
// and Romberg extrapolation for the one transcendental integral. Tests
// compare library output against these, not the other way round.

#include <array>
#include <cmath>
#include <vector>

#include "hjselect/util.hpp"

namespace oracle {

using hjselect::Fraction;

// Cubic with rational coefficients, evaluated in exact arithmetic.
struct RatCubic {
    Fraction c3, c2, c1, c0;

    Fraction value(const Fraction& p) const {
        return ((c3 * p + c2) * p + c1) * p + c0;
    }
    Fraction deriv(const Fraction& p) const {
        return (Fraction{3} * c3 * p + Fraction{2} * c2) * p + c1;
    }
    Fraction second_deriv(const Fraction& p) const {
        return Fraction{6} * c3 * p + Fraction{2} * c2;
    }

    double value_d(double p) const {
        return ((c3.to_double() * p + c2.to_double()) * p + c1.to_double()) * p + c0.to_double();
    }
};

// The three pieces of the counterexample flux, written down independently:
// middle p^2/2 on [-1/2, 1/2], right branch -(5/4)p^3 + (19/8)p^2 - (15/16)p
// + 5/32 on [1/2, 3/2] and beyond, left branch its mirror image.
inline RatCubic middle_piece() { return {Fraction{0}, Fraction{1, 2}, Fraction{0}, Fraction{0}}; }
inline RatCubic right_piece() {
    return {Fraction{-5, 4}, Fraction{19, 8}, Fraction{-15, 16}, Fraction{5, 32}};
}
inline RatCubic left_piece() {
    return {Fraction{5, 4}, Fraction{19, 8}, Fraction{15, 16}, Fraction{5, 32}};
}

// ---- exact rational landmarks (verified in test_flux before use) ----------

inline Fraction flux_at_half() { return {1, 8}; }            // H(1/2)
inline Fraction slope_at_half() { return {1, 2}; }           // H'(1/2)
inline Fraction curvature_at_half() { return {1}; }          // H''(1/2)
inline Fraction flux_at_three_halves() { return {-1, 8}; }   // H(3/2)
inline Fraction plateau_speed() { return {9, 4}; }           // H'(-3/2), the constant a
inline Fraction slope_at_one() { return {1, 16}; }           // H'(1)
inline Fraction flux_at_one() { return {11, 32}; }           // H(1)
inline Fraction curvature_at_three_halves() { return {-13, 2}; }
inline Fraction inflection() { return {19, 30} ; }           // H'' root on the right branch

// Front geometry closed forms. The left plateau edge moves at a = 9/4; the
// characteristic from foot -1/2 moves at -1/2; they meet when
// -3/2 + a t = -(1+t)/2, i.e. t0 = 4/11 at x = -15/22. First characteristic
// focusing is at t_c = 1/max(-H'') = 2/13 with foot at the plateau edge,
// x_c = -3/2 + (2/13)(9/4) = -15/13. The launched jump (-3/2 -> -1/2) has
// Rankine-Hugoniot speed (1/8 - (-1/8))/1 = 1/4.
inline Fraction birth_time() { return {4, 11}; }
inline Fraction birth_offset() { return {15, 22}; }  // birth at x = -15/22
inline Fraction focus_time() { return {2, 13}; }
inline Fraction focus_position() { return {-15, 13}; }
inline Fraction launch_speed() { return {1, 4}; }

// Hump of the right branch: root of H' = 0, 60 p^2 - 76 p + 15 = 0, upper
// root (19 + 2 sqrt(34))/30.
inline double hump_abscissa() { return (19.0 + 2.0 * std::sqrt(34.0)) / 30.0; }
inline double hump_value() { return right_piece().value_d(hump_abscissa()); }

// Admissibility-chord landmarks for an upward jump from -3/2 to v:
// chord_slope(v) = (H(v) + 1/8)/(v + 3/2). The jump first becomes
// inadmissible when the chord touches the middle parabola p^2/2: tangency
// point and slope q solve q^2 + 3q - 1/4 = 0, q = (-3 + sqrt(10))/2.
inline double chord_slope(double v) {
    return (right_piece().value_d(v) + 0.125) / (v + 1.5);
}
inline double onset_chord_slope() { return (-3.0 + std::sqrt(10.0)) / 2.0; }

// At the hump-crossing time the interior test value k = 0 splits the chord
// inequalities with left margin H(z)/z - chord_slope(z), z the hump.
inline double witness_left_margin() {
    const double z = hump_abscissa();
    return hump_value() / z - chord_slope(z);
}
inline double witness_right_margin() {
    // chord_slope(z) - (H(0) - H(-3/2)) / (3/2), H(0) = 0
    return chord_slope(hump_abscissa()) - 1.0 / 12.0;
}

// ---- double-well slice closed forms ---------------------------------------
// g(t) = t^2 + (1-t)^2 + 6 t^2 (1-t)^2: barrier g(1/2) = 7/8, minimizers
// (3 -+ sqrt(3))/6 with common value 5/6.
inline double well_barrier() { return 0.875; }
inline double well_min_lo() { return (3.0 - std::sqrt(3.0)) / 6.0; }
inline double well_min_hi() { return (3.0 + std::sqrt(3.0)) / 6.0; }
inline double well_value() { return 5.0 / 6.0; }

// ---- bump kernel normalization --------------------------------------------
// Integral of exp(1/(s^2-1)) over (-1, 1), computed by Romberg on the
// midpoint rule (the integrand vanishes to all orders at the ends, so the
// trapezoid family converges fast). Library value must agree to 1e-9.
inline double bump_mass() {
    // midpoint sums M_k with 2^k * 64 cells, Richardson-extrapolated
    const int levels = 6;
    std::array<double, levels> m{};
    for (int k = 0; k < levels; ++k) {
        const std::size_t n = 64u << k;
        const double h = 2.0 / static_cast<double>(n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = -1.0 + (static_cast<double>(i) + 0.5) * h;
            s += std::exp(1.0 / (x * x - 1.0));
        }
        m[k] = s * h;
    }
    // two Richardson sweeps (midpoint error expansion in h^2)
    std::array<double, levels> a = m;
    for (int sweep = 1; sweep < levels; ++sweep) {
        const double f = std::pow(4.0, sweep);
        for (int k = levels - 1; k >= sweep; --k)
            a[k] = (f * a[k] - a[k - 1]) / (f - 1.0);
    }
    return a[levels - 1];
}

// Frozen decimal pin for the same quantity (sanity anchor for the Romberg
// code itself).
constexpr double kBumpMassApprox = 0.443994;

// Convex-control closed forms (quadratic flux, decreasing ramp from 1 to -1
// on [-1, 1]): characteristics first cross at t = 1, and the entropic
// solution has a single stationary shock at x = 0 joining 1 to -1.
constexpr double kControlFocusTime = 1.0;
constexpr double kControlShockSpeed = 0.0;

}  // namespace oracle
