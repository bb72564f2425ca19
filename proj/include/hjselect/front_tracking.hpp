#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hjselect/flux.hpp"
#include "hjselect/profile.hpp"

namespace hjselect {

// ---- shock curves ---------------------------------------------------------

struct ShockSample {
    double t = 0.0, z = 0.0;  // time, position
    double v_minus = 0.0, v_plus = 0.0;
    double speed = 0.0;  // Rankine-Hugoniot speed at the sample
};

enum class ShockEnd { merged, reached_horizon };

struct ShockCurve {
    std::string name;
    std::vector<ShockSample> samples;  // increasing t; uniform step except the last
    ShockEnd end = ShockEnd::reached_horizon;

    double birth_time() const { return samples.front().t; }
    double death_time() const { return samples.back().t; }
    bool active_at(double t) const { return t >= birth_time() && t <= death_time(); }
    // linear interpolation between samples; ConfigError outside the lifetime
    double position_at(double t) const;
    const ShockSample& sample_near(double t) const;
};

// Rankine-Hugoniot speed of the jump. DegenerateJump if the states are
// closer than 1e-12.
double rh_speed(const PiecewiseCubicFlux& flux, double v_minus, double v_plus);

// ---- initial data and characteristics -------------------------------------

// Left plateau at -3/2, unit-slope ramp to 3/2 across [-3/2, 3/2], plateau
// at 3/2 out to L, downward ramp to 1/2 across [L, L+1], constant beyond.
// Requires L > 3.
PiecewiseLinearProfile counterexample_profile(double L);

// Decreasing ramp from 1 to -1 across [-1, 1]: the convex-control data.
PiecewiseLinearProfile convex_control_profile();

// Position at time t of the straight characteristic launched at `foot`.
double characteristic_position(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                               double t, double foot);

struct FocusEvent {
    double t = 0.0;     // earliest crossing time
    double x = 0.0;     // where it happens
    double foot = 0.0;  // characteristic foot involved
};

// Earliest crossing among characteristics with feet in [lo, hi]: adjacent
// pairs of a scan grid give candidate collapse times 1/(-pair slope of H'
// along the data); the minimum is refined by rescanning around the best
// pair. NoCrossing if all pair slopes stay nonnegative.
FocusEvent first_crossing(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                          double lo, double hi, int scan_points);

// All feet whose straight characteristic passes through (t, x), ignoring
// shock genealogy. Piecewise enumeration with bracketed bisection and Newton
// polish; exact to machine precision.
std::vector<double> characteristic_preimages(const PiecewiseCubicFlux& flux,
                                             const PiecewiseLinearProfile& v0,
                                             double t, double x);

// ---- tracing --------------------------------------------------------------

// One-sided states (v_minus, v_plus) at a point on a moving discontinuity.
using StateReconstructor = std::function<std::pair<double, double>(double t, double z)>;

// Called with each freshly appended sample; returning true stops the trace.
using StopCondition = std::function<bool(const ShockSample&)>;

// RK4 integration of dz/dt = rh_speed(reconstructed states) from t_start to
// t_end (shortened final step), sampling every accepted step. Jumps narrower
// than 1e-12 (a degenerate birth) move at the characteristic speed of the
// midpoint state.
ShockCurve trace_shock(const PiecewiseCubicFlux& flux, const StateReconstructor& rec,
                       double t_start, double z_start, double dt, double t_end,
                       const StopCondition& stop = nullptr);

// Generic reconstructor: v0 at the leftmost / rightmost characteristic
// preimage of (t, z). Valid while no overturned sheet from another part of
// the data has drifted across z (early times); the builders switch to a
// variant that filters the preimages against the tracked curves once such
// sheets appear. StateReconstructionFailed if fewer than two distinct feet
// arrive.
std::pair<double, double> reconstruct_states(const PiecewiseCubicFlux& flux,
                                             const PiecewiseLinearProfile& v0,
                                             double t, double z);

// ---- the counterexample construction --------------------------------------

enum class ShockBirth {
    at_fan_collision,  // launch when the plateau edge reaches the fan edge
                       // characteristic: the constructed timeline
    at_first_focus,    // launch at the first characteristic crossing
};

struct DerivedConstants {
    double plateau_speed = 0.0;   // a = H'(-3/2)
    double birth_time = 0.0;      // t0 = 1/(a - H'(-1/2))
    double birth_position = 0.0;  // -3/2 + a t0
    double focus_time = 0.0;      // t_c from first_crossing
    double focus_position = 0.0;  // x_c
    double launch_speed = 0.0;    // RH speed of the launched jump at birth
    double merge_time = 0.0;      // t1: symmetric shocks meet at x = 0
    double plateau_width = 0.0;   // L = a t1
    double hump_crossing = 0.0;   // t3: late shock's right state crosses the
                                  // hump of the flux (NaN if not reached)
    double horizon = 0.0;         // end of tracked time
};

struct FrontTrackedSolution {
    PiecewiseCubicFlux flux;
    PiecewiseLinearProfile v0;
    ShockBirth birth_rule = ShockBirth::at_fan_collision;
    std::vector<ShockCurve> shocks;
    DerivedConstants constants;

    const ShockCurve& curve(const std::string& name) const;
};

struct CounterexampleOptions {
    double dt = 1e-4;
    ShockBirth birth_rule = ShockBirth::at_fan_collision;
    double horizon = 0.0;      // 0: run until horizon_pad past the hump crossing
    double horizon_pad = 0.5;  // used when horizon == 0
};

// The full pipeline: constants, symmetric pair traced to its merge, then the
// late shock; the right plateau width is fixed to L = a t1 so its supply is
// exhausted exactly at the merge.
FrontTrackedSolution build_counterexample(const CounterexampleOptions& opt);

// Quadratic flux with the decreasing ramp, traced through its single
// entropic stationary shock. The certificate scan must stay quiet on it.
FrontTrackedSolution build_convex_control(double dt, double horizon);

// ---- evaluation -----------------------------------------------------------

// Value of the tracked weak solution. Characteristic preimages that crossed
// a tracked curve on their way to (t, x) are discarded. Right of every
// active curve the rightmost surviving sheet is selected (leftover
// compressed-ramp sheets ride below it); elsewhere the leftmost is, which is
// also the deterministic convention for the untracked multivalued pockets.
// OnShock within 1e-12 of an active curve.
double eval_solution(const FrontTrackedSolution& sol, double t, double x);

// Potential f(t, x): anchor value on the far-left constant state plus the
// integral of -v, split at shock positions, adaptive Simpson on each span.
double potential(const FrontTrackedSolution& sol, double t, double x);

// ---- admissibility --------------------------------------------------------

struct ChordRecord {
    double k = 0.0;
    double left_excess = 0.0;   // positive = the (v_plus, k) slope inequality fails
    double right_excess = 0.0;  // positive = the (k, v_minus) slope inequality fails
    bool violated = false;
};

struct ChordCheck {
    bool admissible = true;
    double worst_margin = 0.0;  // most positive excess over all probes
    double worst_k = 0.0;
    std::vector<ChordRecord> records;
};

// Chord (Oleinik) test of the jump v_minus -> v_plus with n_k interior
// probes. Orientation-aware: an upward jump needs the graph above the chord,
// a downward one below.
ChordCheck oleinik_chord_check(const PiecewiseCubicFlux& flux, double v_minus, double v_plus,
                               int n_k, double tol = 1e-11);

// Exact violation margin sup_k of the failed chord gap, by enumerating
// critical points; no probe grid involved. Returns {margin, argmax k};
// margin <= 0 means admissible.
std::pair<double, double> chord_violation_margin(const PiecewiseCubicFlux& flux,
                                                 double v_minus, double v_plus);

struct EntropyCertificate {
    std::string curve;
    double t = 0.0, z = 0.0;
    double v_minus = 0.0, v_plus = 0.0;
    double k = 0.0;            // violating probe state
    double margin = 0.0;       // size of the failed inequality at k
    double left_excess = 0.0;  // both slope-inequality excesses at k
    double right_excess = 0.0;
    double chord_slope = 0.0;
};

struct CertificateScan {
    EntropyCertificate onset;    // earliest violating sample
    EntropyCertificate witness;  // violation at the hump-crossing time, probed at k = 0
    bool has_witness = false;    // false when the run ends before the hump crossing
};

// Scans every sample of every curve with the exact margin test.
// NoViolationFound if the whole solution is chord-admissible.
CertificateScan entropy_certificate(const FrontTrackedSolution& sol);

struct RhResidualReport {
    double max_residual = 0.0;
    std::vector<double> per_curve;
};

// Compares a three-point finite-difference slope of each curve against the
// recorded Rankine-Hugoniot speed. `skip` leading samples per curve are
// excluded (a curve born at a focusing point has a one-sided root
// singularity there, where the difference quotient is meaningless).
RhResidualReport rh_residual(const FrontTrackedSolution& sol, std::size_t skip = 2);

}  // namespace hjselect
