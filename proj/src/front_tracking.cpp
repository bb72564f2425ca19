#include "hjselect/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "hjselect/errors.hpp"
#include "hjselect/godunov.hpp"

namespace hjselect {

namespace {
constexpr double kShockTol = 1e-12;    // "on the shock" distance
constexpr double kDegenerate = 1e-12;  // jump size below which RH is meaningless
constexpr double kSideTol = 1e-11;     // grazing tolerance for the genealogy filter
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

// ---- ShockCurve -----------------------------------------------------------

double ShockCurve::position_at(double t) const {
    if (samples.empty() || !active_at(t))
        throw ConfigError("shock curve: position requested outside the lifetime");
    if (samples.size() == 1) return samples.front().z;
    const double t0 = samples.front().t;
    const double step = samples[1].t - t0;
    std::size_t i = step > 0.0 ? static_cast<std::size_t>(std::max(0.0, (t - t0) / step)) : 0;
    i = std::min(i, samples.size() - 2);
    while (i + 2 < samples.size() && samples[i + 1].t < t) ++i;
    while (i > 0 && samples[i].t > t) --i;
    const auto& s0 = samples[i];
    const auto& s1 = samples[i + 1];
    const double w = (t - s0.t) / (s1.t - s0.t);
    return s0.z + w * (s1.z - s0.z);
}

const ShockSample& ShockCurve::sample_near(double t) const {
    if (samples.empty()) throw ConfigError("shock curve: empty");
    std::size_t best = 0;
    double gap = std::abs(samples[0].t - t);
    // samples are uniformly spaced except the last; jump close, then refine
    const double step = samples.size() > 1 ? samples[1].t - samples[0].t : 1.0;
    std::size_t i = step > 0.0
                        ? static_cast<std::size_t>(std::clamp(
                              (t - samples[0].t) / step, 0.0,
                              static_cast<double>(samples.size() - 1)))
                        : 0;
    for (std::size_t j = i >= 2 ? i - 2 : 0; j < std::min(samples.size(), i + 3); ++j) {
        const double g = std::abs(samples[j].t - t);
        if (g < gap) { gap = g; best = j; }
    }
    if (std::abs(samples.back().t - t) < gap) best = samples.size() - 1;
    return samples[best];
}

const ShockCurve& FrontTrackedSolution::curve(const std::string& name) const {
    for (const auto& c : shocks)
        if (c.name == name) return c;
    throw ConfigError("no tracked curve named " + name);
}

// ---- basics ---------------------------------------------------------------

double rh_speed(const PiecewiseCubicFlux& flux, double v_minus, double v_plus) {
    if (std::abs(v_plus - v_minus) < kDegenerate)
        throw DegenerateJump("rh_speed: states closer than 1e-12");
    return (flux.value(v_plus) - flux.value(v_minus)) / (v_plus - v_minus);
}

namespace {
double chord_or_char(const PiecewiseCubicFlux& flux, double vm, double vp) {
    if (std::abs(vp - vm) < kDegenerate) return flux.deriv(0.5 * (vm + vp));
    return (flux.value(vp) - flux.value(vm)) / (vp - vm);
}
}  // namespace

PiecewiseLinearProfile counterexample_profile(double L) {
    if (!(L > 3.0)) throw ConfigError("counterexample_profile: need L > 3");
    PiecewiseLinearProfile p;
    p.knots = {-1.5, 1.5, L, L + 1.0};
    p.values = {-1.5, 1.5, 1.5, 0.5};
    p.left_value = -1.5;
    p.right_value = 0.5;
    return p;
}

PiecewiseLinearProfile convex_control_profile() {
    PiecewiseLinearProfile p;
    p.knots = {-1.0, 1.0};
    p.values = {1.0, -1.0};
    p.left_value = 1.0;
    p.right_value = -1.0;
    return p;
}

double characteristic_position(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                               double t, double foot) {
    return foot + t * flux.deriv(v0(foot));
}

// ---- first crossing -------------------------------------------------------

FocusEvent first_crossing(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                          double lo, double hi, int scan_points) {
    if (!(lo < hi)) throw ConfigError("first_crossing: need lo < hi");
    if (scan_points < 16) throw ConfigError("first_crossing: need at least 16 scan points");

    double wlo = lo, whi = hi;
    double best_t = std::numeric_limits<double>::infinity();
    double best_foot = lo;

    for (int round = 0; round < 8; ++round) {
        const int n = scan_points;
        const double h = (whi - wlo) / (n - 1);
        best_t = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < n; ++i) {
            const double x0 = wlo + h * i;
            const double x1 = x0 + h;
            // an adjacent pair collapses when 1 + t * (dc/dx) = 0
            const double dc = (flux.deriv(v0(x1)) - flux.deriv(v0(x0))) / h;
            if (dc < 0.0) {
                const double tc = -1.0 / dc;
                if (tc < best_t) {
                    best_t = tc;
                    best_foot = 0.5 * (x0 + x1);
                }
            }
        }
        if (!std::isfinite(best_t)) throw NoCrossing("first_crossing: characteristics stay ordered");
        const double new_lo = std::max(lo, best_foot - 2.0 * h);
        const double new_hi = std::min(hi, best_foot + 2.0 * h);
        if (new_hi - new_lo >= whi - wlo) break;  // window stopped shrinking
        // scans below this width would divide evaluation rounding by a pair
        // spacing too small for it, polluting the collapse times
        if (new_hi - new_lo < 1e-3) break;
        wlo = new_lo;
        whi = new_hi;
    }

    FocusEvent ev;
    ev.t = best_t;
    ev.foot = best_foot;
    ev.x = characteristic_position(flux, v0, best_t, best_foot);
    return ev;
}

// ---- characteristic preimages ---------------------------------------------

namespace {

struct LinearPiece {
    double a, b;      // foot interval
    double va, slope;  // data value va + slope * (x - a)
};

double piece_value(const LinearPiece& p, double x) { return p.va + p.slope * (x - p.a); }

// straight-characteristic arrival map and its foot derivative
double psi(const PiecewiseCubicFlux& flux, const LinearPiece& p, double t, double x) {
    return x + t * flux.deriv(piece_value(p, x));
}
double psi_prime(const PiecewiseCubicFlux& flux, const LinearPiece& p, double t, double x) {
    return 1.0 + t * p.slope * flux.second_deriv(piece_value(p, x));
}

void find_on_arm(const PiecewiseCubicFlux& flux, const LinearPiece& p, double t,
                 double target, double lo, double hi, std::vector<double>& feet) {
    if (!(lo < hi)) return;
    double flo = psi(flux, p, t, lo) - target;
    double fhi = psi(flux, p, t, hi) - target;
    if (flo == 0.0) { feet.push_back(lo); return; }
    if (fhi == 0.0) { feet.push_back(hi); return; }
    if ((flo > 0.0) == (fhi > 0.0)) return;
    double a = lo, b = hi;
    for (int i = 0; i < 40; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = psi(flux, p, t, m) - target;
        if (fm == 0.0) { a = b = m; break; }
        if ((fm > 0.0) == (flo > 0.0)) { a = m; flo = fm; }
        else b = m;
    }
    double x = 0.5 * (a + b);
    for (int i = 0; i < 3; ++i) {  // Newton polish to machine precision
        const double d = psi_prime(flux, p, t, x);
        if (std::abs(d) < 1e-13) break;
        x = std::clamp(x - (psi(flux, p, t, x) - target) / d, lo, hi);
    }
    feet.push_back(x);
}

void collect_piece_preimages(const PiecewiseCubicFlux& flux, const LinearPiece& p, double t,
                             double target, std::vector<double>& feet) {
    // split where the data crosses a flux breakpoint, so H' is one polynomial
    // per sub-span
    double cuts[8];
    std::size_t ncuts = 0;
    if (p.slope != 0.0) {
        const double vb = piece_value(p, p.b);
        for (double bp : flux.breakpoints) {
            if ((p.va - bp) * (vb - bp) < 0.0)
                cuts[ncuts++] = p.a + (bp - p.va) / p.slope;
        }
        std::sort(cuts, cuts + ncuts);
    }
    double lo = p.a;
    for (std::size_t c = 0; c <= ncuts; ++c) {
        const double hi = c < ncuts ? cuts[c] : p.b;
        if (lo < hi) {
            // psi' is linear on the sub-span; split at its root so each arm
            // is monotone and bisection brackets are honest
            const double dlo = psi_prime(flux, p, t, lo);
            const double dhi = psi_prime(flux, p, t, hi);
            if ((dlo > 0.0) != (dhi > 0.0) && dlo != dhi) {
                const double r = lo + (0.0 - dlo) * (hi - lo) / (dhi - dlo);
                find_on_arm(flux, p, t, target, lo, std::clamp(r, lo, hi), feet);
                find_on_arm(flux, p, t, target, std::clamp(r, lo, hi), hi, feet);
            } else {
                find_on_arm(flux, p, t, target, lo, hi, feet);
            }
        }
        lo = hi;
    }
}

}  // namespace

std::vector<double> characteristic_preimages(const PiecewiseCubicFlux& flux,
                                             const PiecewiseLinearProfile& v0,
                                             double t, double x) {
    if (!(t >= 0.0)) throw ConfigError("characteristic_preimages: need t >= 0");
    std::vector<double> feet;
    if (v0.knots.empty()) {
        feet.push_back(x - t * flux.deriv(v0.left_value));
        return feet;
    }
    if (t == 0.0) {
        feet.push_back(x);
        return feet;
    }

    // left extension (constant data: direct formula)
    {
        const double foot = x - t * flux.deriv(v0.left_value);
        if (foot <= v0.knots.front() + 1e-12) feet.push_back(foot);
    }
    for (std::size_t i = 0; i + 1 < v0.knots.size(); ++i) {
        LinearPiece p;
        p.a = v0.knots[i];
        p.b = v0.knots[i + 1];
        p.va = v0.values[i];
        p.slope = (v0.values[i + 1] - v0.values[i]) / (p.b - p.a);
        collect_piece_preimages(flux, p, t, x, feet);
    }
    {
        const double foot = x - t * flux.deriv(v0.right_value);
        if (foot >= v0.knots.back() - 1e-12) feet.push_back(foot);
    }

    std::sort(feet.begin(), feet.end());
    feet.erase(std::unique(feet.begin(), feet.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-9; }),
               feet.end());
    return feet;
}

std::pair<double, double> reconstruct_states(const PiecewiseCubicFlux& flux,
                                             const PiecewiseLinearProfile& v0,
                                             double t, double z) {
    const auto feet = characteristic_preimages(flux, v0, t, z);
    if (feet.size() < 2)
        throw StateReconstructionFailed("reconstruct_states: fewer than two arriving characteristics");
    return {v0(feet.front()), v0(feet.back())};
}

// ---- genealogy ------------------------------------------------------------

namespace {

// A foot survives if its straight characteristic stayed on one side of every
// tracked curve up to time t. A sign change, or a graze strictly inside a
// curve's lifetime, means the characteristic was absorbed earlier and its
// sheet is not the selected one. Grazes at the first and last probe are
// inconclusive and skipped: every legitimately arriving characteristic
// grazes the curve it feeds at time t itself, and the merge point is grazed
// at once by the supplies of all three curves.
// Position on a curve, linearly continued past the last recorded sample.
double curve_pos(const ShockCurve& c, double s) {
    const auto& last = c.samples.back();
    if (s > last.t) return last.z + (s - last.t) * last.speed;
    return c.position_at(s);
}

// `growing` marks the curve the tracer is currently stepping. Its probes are
// capped at its recorded history: stage queries sit O(h^2) off the linear
// continuation with data-dependent sign, which would fake a crossing for a
// legitimately arriving characteristic. Every other unmerged curve is
// continued up to the query time instead, so absorptions inside the partner's
// last, not yet recorded step stay visible.
bool foot_survives(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                   const std::vector<const ShockCurve*>& curves, double t, double foot,
                   const ShockCurve* growing) {
    const double speed = flux.deriv(v0(foot));
    for (const ShockCurve* c : curves) {
        if (!c || c->samples.empty()) continue;
        const double s0 = c->birth_time();
        const bool capped = c == growing || c->end == ShockEnd::merged;
        const double s1 = capped ? std::min(c->death_time(), t) : t;
        if (s0 >= s1) continue;

        double probes[8];
        int np = 0;
        for (int i = 0; i <= 5; ++i)
            probes[np++] = i == 5 ? s1 : s0 + (s1 - s0) * i / 5.0;
        // A curve born fast that decelerates can sweep over a slow
        // characteristic and let it cross back, all between two grid probes.
        // Against a curve with monotone speed the side function is piecewise
        // linear and convex or concave, so such an excursion peaks where the
        // curve speed passes the characteristic speed; the samples bracketing
        // that crossover are probed as well. For a single crossing the
        // endpoint signs already disagree and these probes are inert.
        const auto& ss = c->samples;
        const bool rising = ss.front().speed <= ss.back().speed;
        const auto it = std::lower_bound(
            ss.begin(), ss.end(), speed, [rising](const ShockSample& a, double v) {
                return rising ? a.speed < v : a.speed > v;
            });
        if (it != ss.begin() && it != ss.end()) {
            probes[np++] = std::clamp(std::prev(it)->t, s0, s1);
            probes[np++] = std::clamp(it->t, s0, s1);
        }

        int ref = 0;
        for (int i = 0; i < np; ++i) {
            // endpoints pinned exactly: s0 + (s1 - s0) may overshoot by an ulp
            const double s = probes[i];
            const double side = foot + s * speed - curve_pos(*c, s);
            if (std::abs(side) <= kSideTol) {
                if (s == s0 || s == s1) continue;  // endpoint graze: inconclusive
                return false;                      // absorbed strictly inside
            }
            const int sgn = side > 0.0 ? 1 : -1;
            if (ref == 0) ref = sgn;
            else if (sgn != ref) return false;  // crossed the curve
        }
    }
    return true;
}

std::vector<double> surviving_feet(const PiecewiseCubicFlux& flux,
                                   const PiecewiseLinearProfile& v0,
                                   const std::vector<const ShockCurve*>& curves,
                                   double t, double x,
                                   const ShockCurve* growing = nullptr) {
    auto feet = characteristic_preimages(flux, v0, t, x);
    std::vector<double> alive;
    alive.reserve(feet.size());
    for (double f : feet)
        if (foot_survives(flux, v0, curves, t, f, growing)) alive.push_back(f);
    return alive;  // still sorted
}

// One-sided states on a tracked curve: extremes of the surviving feet. A
// single foot (degenerate birth) yields an honest zero-width jump.
std::pair<double, double> selected_states(const PiecewiseCubicFlux& flux,
                                          const PiecewiseLinearProfile& v0,
                                          const std::vector<const ShockCurve*>& curves,
                                          double t, double z,
                                          const ShockCurve* growing = nullptr) {
    const auto alive = surviving_feet(flux, v0, curves, t, z, growing);
    if (alive.empty())
        throw StateReconstructionFailed("state reconstruction: no surviving characteristic");
    return {v0(alive.front()), v0(alive.back())};
}

}  // namespace

// ---- tracing --------------------------------------------------------------

namespace {

struct Deriv {
    double speed, vm, vp;
};

Deriv eval_speed(const PiecewiseCubicFlux& flux, const StateReconstructor& rec,
                 double t, double z) {
    const auto [vm, vp] = rec(t, z);
    return {chord_or_char(flux, vm, vp), vm, vp};
}

// A launch time computed numerically can sit a hair below the true focusing
// time, where the data still look single-valued. A degenerate birth therefore
// carries the limit-from-above jump when one exists.
Deriv birth_speed(const PiecewiseCubicFlux& flux, const StateReconstructor& rec,
                  double t, double z) {
    Deriv d = eval_speed(flux, rec, t, z);
    if (std::abs(d.vp - d.vm) < kDegenerate) {
        const Deriv above = eval_speed(flux, rec, t + 1e-9, z);
        if (std::abs(above.vp - above.vm) >= kDegenerate) d = above;
    }
    return d;
}

// one classical RK4 step of dz/dt = speed(t, z)
double rk4_step(const PiecewiseCubicFlux& flux, const StateReconstructor& rec,
                double t, double z, double h, const Deriv& k1) {
    const double k2 = eval_speed(flux, rec, t + 0.5 * h, z + 0.5 * h * k1.speed).speed;
    const double k3 = eval_speed(flux, rec, t + 0.5 * h, z + 0.5 * h * k2).speed;
    const double k4 = eval_speed(flux, rec, t + h, z + h * k3).speed;
    return z + h / 6.0 * (k1.speed + 2.0 * k2 + 2.0 * k3 + k4);
}

ShockSample make_sample(double t, double z, const Deriv& d) {
    return {t, z, d.vm, d.vp, d.speed};
}

}  // namespace

ShockCurve trace_shock(const PiecewiseCubicFlux& flux, const StateReconstructor& rec,
                       double t_start, double z_start, double dt, double t_end,
                       const StopCondition& stop) {
    if (!(dt > 0.0)) throw ConfigError("trace_shock: need dt > 0");
    if (!(t_end > t_start)) throw ConfigError("trace_shock: need t_end > t_start");

    ShockCurve curve;
    double t = t_start, z = z_start;
    Deriv d = eval_speed(flux, rec, t, z);
    curve.samples.push_back(make_sample(t, z, d));
    if (stop && stop(curve.samples.back())) return curve;

    while (t < t_end - 1e-13) {
        const double h = std::min(dt, t_end - t);
        z = rk4_step(flux, rec, t, z, h, d);
        t += h;
        d = eval_speed(flux, rec, t, z);
        curve.samples.push_back(make_sample(t, z, d));
        if (stop && stop(curve.samples.back())) break;
    }
    return curve;
}

// ---- the counterexample pipeline ------------------------------------------

namespace {

struct PairResult {
    ShockCurve a, b;
    double merge_time;
    double merge_z;
};

// Trace one curve with states reconstructed from surviving characteristics.
// The filter sees the finished curves in `others` plus the curve under
// construction, so sheets absorbed earlier never carry one-sided states.
ShockCurve trace_filtered(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                          std::vector<const ShockCurve*> others, double t_start,
                          double z_start, double dt, double t_end,
                          const StopCondition& stop = {}) {
    if (!(t_end > t_start)) throw ConfigError("shock trace: need t_end > t_start");

    ShockCurve curve;
    others.push_back(&curve);
    const StateReconstructor rec = [&](double t, double z) {
        return selected_states(flux, v0, others, t, z, &curve);
    };

    double t = t_start, z = z_start;
    Deriv d = birth_speed(flux, rec, t, z);
    curve.samples.push_back(make_sample(t, z, d));
    if (stop && stop(curve.samples.back())) return curve;

    while (t < t_end - 1e-13) {
        const double h = std::min(dt, t_end - t);
        z = rk4_step(flux, rec, t, z, h, d);
        t += h;
        d = eval_speed(flux, rec, t, z);
        curve.samples.push_back(make_sample(t, z, d));
        if (stop && stop(curve.samples.back())) break;
    }
    return curve;
}

// Integrate the symmetric pair in lockstep until the gap closes; refine the
// meeting time linearly and land both curves on it. Both partial curves sit
// in the reconstruction filter, so each shock stops seeing the sheets the
// other one has already absorbed.
PairResult trace_pair(const PiecewiseCubicFlux& flux, const PiecewiseLinearProfile& v0,
                      double t_birth, double zA0, double zB0, double dt, double t_limit) {
    PairResult res;
    const std::vector<const ShockCurve*> partial = {&res.a, &res.b};
    const StateReconstructor recA = [&](double t, double z) {
        return selected_states(flux, v0, partial, t, z, &res.a);
    };
    const StateReconstructor recB = [&](double t, double z) {
        return selected_states(flux, v0, partial, t, z, &res.b);
    };

    double t = t_birth, zA = zA0, zB = zB0;
    Deriv dA = birth_speed(flux, recA, t, zA);
    Deriv dB = birth_speed(flux, recB, t, zB);
    res.a.samples.push_back(make_sample(t, zA, dA));
    res.b.samples.push_back(make_sample(t, zB, dB));

    // a degenerate birth starts with zero gap; arm the merge test only once
    // the pair has visibly opened
    bool opened = zB - zA > 1e-3;
    while (true) {
        if (t >= t_limit - 1e-13)
            throw ConfigError("trace_pair: horizon ends before the shocks merge");
        const double h = std::min(dt, t_limit - t);
        const double zA1 = rk4_step(flux, recA, t, zA, h, dA);
        const double zB1 = rk4_step(flux, recB, t, zB, h, dB);
        t += h;
        zA = zA1;
        zB = zB1;
        dA = eval_speed(flux, recA, t, zA);
        dB = eval_speed(flux, recB, t, zB);
        res.a.samples.push_back(make_sample(t, zA, dA));
        res.b.samples.push_back(make_sample(t, zB, dB));

        const double gap = zB - zA;
        if (!opened) {
            opened = gap > 1e-3;
            continue;
        }
        if (gap <= 2.0 * dt * (std::abs(dA.speed) + std::abs(dB.speed))) break;
    }

    // linear interpolation of the closing gap gives the merge time
    const double closing = dA.speed - dB.speed;
    if (!(closing > 0.0)) throw NumericalError("trace_pair: shocks stopped approaching");
    const double dt_meet = (zB - zA) / closing;
    const double t1 = t + dt_meet;

    zA = rk4_step(flux, recA, t, zA, dt_meet, dA);
    zB = rk4_step(flux, recB, t, zB, dt_meet, dB);
    if (std::abs(zA + zB) > 1e-8)
        throw NumericalError("trace_pair: merge is not symmetric about the origin");

    // Each curve keeps its own integrated landing; the merged shock launches
    // from the midpoint. The final one-sided states are patched afterwards:
    // only with both histories extended to the merge can the filter see the
    // last absorptions, so they are re-evaluated a hair before the merge
    // where each curve still carries its own jump.
    res.a.samples.push_back(make_sample(t1, zA, dA));
    res.b.samples.push_back(make_sample(t1, zB, dB));
    const double eps = 1e-9;
    const Deriv dAf = eval_speed(flux, recA, t1 - eps, zA - eps * std::abs(dA.speed));
    const Deriv dBf = eval_speed(flux, recB, t1 - eps, zB + eps * std::abs(dB.speed));
    res.a.samples.back() = make_sample(t1, zA, dAf);
    res.b.samples.back() = make_sample(t1, zB, dBf);
    res.a.end = ShockEnd::merged;
    res.b.end = ShockEnd::merged;
    res.merge_time = t1;
    // the symmetry guard held, so the merged shock launches from the axis
    res.merge_z = 0.0;
    return res;
}

}  // namespace

FrontTrackedSolution build_counterexample(const CounterexampleOptions& opt) {
    if (!(opt.dt > 0.0 && opt.dt <= 0.01))
        throw ConfigError("build_counterexample: need 0 < dt <= 0.01");

    FrontTrackedSolution sol;
    sol.flux = counterexample_flux();
    sol.birth_rule = opt.birth_rule;
    auto& c = sol.constants;

    c.plateau_speed = sol.flux.deriv(-1.5);
    c.birth_time = 1.0 / (c.plateau_speed - sol.flux.deriv(-0.5));
    c.birth_position = -1.5 + c.plateau_speed * c.birth_time;

    // provisional data: the right plateau width is unknown until the merge,
    // and nothing before the merge can see its far end
    const PiecewiseLinearProfile provisional = counterexample_profile(1000.0);

    const FocusEvent focus = first_crossing(sol.flux, provisional, -2.0, 0.0, 2001);
    c.focus_time = focus.t;
    c.focus_position = focus.x;

    const double t_birth = opt.birth_rule == ShockBirth::at_fan_collision ? c.birth_time
                                                                          : c.focus_time;
    const double z_birth = opt.birth_rule == ShockBirth::at_fan_collision ? c.birth_position
                                                                          : c.focus_position;

    const double pair_limit = opt.horizon > 0.0 ? opt.horizon : 100.0;
    PairResult pair = trace_pair(sol.flux, provisional, t_birth, z_birth, -z_birth,
                                 opt.dt, pair_limit);
    pair.a.name = "A";
    pair.b.name = "B";
    c.merge_time = pair.merge_time;
    c.launch_speed = pair.a.samples.front().speed;

    c.plateau_width = c.plateau_speed * c.merge_time;
    sol.v0 = counterexample_profile(c.plateau_width);

    const std::vector<const ShockCurve*> pair_curves = {&pair.a, &pair.b};
    const double hump = convexity_report(sol.flux, 0.5, 1.5).argmax;
    const double z_merge = pair.merge_z;

    ShockCurve late;
    c.hump_crossing = kNaN;

    if (opt.horizon > 0.0) {
        c.horizon = opt.horizon;
        late = trace_filtered(sol.flux, sol.v0, pair_curves, c.merge_time, z_merge,
                              opt.dt, opt.horizon);
    } else {
        // First leg: run until the right state drops through the hump. The
        // crossing happens where the merged shock overtakes the stationary
        // characteristic carrying the hump state, a march across the whole
        // absorbed plateau at chord speeds that stay below 3/16; the cap only
        // guards against a stalled trace.
        const double leg_cap = c.merge_time + (c.plateau_width + 2.0) / 0.06;
        ShockCurve leg = trace_filtered(sol.flux, sol.v0, pair_curves, c.merge_time,
                                        z_merge, opt.dt, leg_cap,
                                        [hump](const ShockSample& s) { return s.v_plus <= hump; });
        if (leg.samples.back().v_plus > hump)
            throw NumericalError("build_counterexample: hump crossing not reached");
        late = std::move(leg);
        const auto& s1 = late.samples[late.samples.size() - 2];
        const auto& s2 = late.samples.back();
        c.hump_crossing = s1.t + (s1.v_plus - hump) * (s2.t - s1.t) / (s1.v_plus - s2.v_plus);
        c.horizon = c.hump_crossing + opt.horizon_pad;
        ShockCurve leg2 = trace_filtered(sol.flux, sol.v0, pair_curves, s2.t, s2.z,
                                         opt.dt, c.horizon);
        late.samples.insert(late.samples.end(), leg2.samples.begin() + 1, leg2.samples.end());
    }
    // interpolate the hump crossing for explicit horizons that pass it
    if (!std::isfinite(c.hump_crossing)) {
        for (std::size_t i = 1; i < late.samples.size(); ++i) {
            if (late.samples[i - 1].v_plus > hump && late.samples[i].v_plus <= hump) {
                const auto& s1 = late.samples[i - 1];
                const auto& s2 = late.samples[i];
                c.hump_crossing = s1.t + (s1.v_plus - hump) * (s2.t - s1.t) / (s1.v_plus - s2.v_plus);
                break;
            }
        }
        c.horizon = opt.horizon;
    }
    late.name = "C";

    sol.shocks = {std::move(pair.a), std::move(pair.b), std::move(late)};
    return sol;
}

FrontTrackedSolution build_convex_control(double dt, double horizon) {
    if (!(dt > 0.0)) throw ConfigError("build_convex_control: need dt > 0");

    FrontTrackedSolution sol;
    sol.flux = quadratic_flux();
    sol.v0 = convex_control_profile();
    sol.birth_rule = ShockBirth::at_first_focus;
    auto& c = sol.constants;

    const FocusEvent focus = first_crossing(sol.flux, sol.v0, -1.2, 1.2, 2001);
    c.focus_time = focus.t;
    c.focus_position = focus.x;
    c.birth_time = focus.t;
    c.birth_position = focus.x;
    c.plateau_speed = kNaN;
    c.merge_time = kNaN;
    c.plateau_width = kNaN;
    c.hump_crossing = kNaN;
    c.horizon = horizon;
    if (!(horizon > focus.t))
        throw ConfigError("build_convex_control: horizon must exceed the focusing time");

    ShockCurve s = trace_filtered(sol.flux, sol.v0, {}, focus.t, focus.x, dt, horizon);
    s.name = "S";
    c.launch_speed = s.samples.front().speed;
    sol.shocks = {std::move(s)};
    return sol;
}

// ---- evaluation -----------------------------------------------------------

double eval_solution(const FrontTrackedSolution& sol, double t, double x) {
    if (!(t >= 0.0)) throw ConfigError("eval_solution: need t >= 0");
    if (t == 0.0) return sol.v0(x);

    std::vector<const ShockCurve*> curves;
    curves.reserve(sol.shocks.size());
    for (const auto& curve : sol.shocks) curves.push_back(&curve);

    bool any_active = false;
    double z_hi = 0.0;
    for (const auto& curve : sol.shocks) {
        if (!curve.active_at(t)) continue;
        const double z = curve.position_at(t);
        if (std::abs(x - z) <= kShockTol)
            throw OnShock("eval_solution: point sits on a tracked curve");
        z_hi = any_active ? std::max(z_hi, z) : z;
        any_active = true;
    }

    const auto alive = surviving_feet(sol.flux, sol.v0, curves, t, x);
    if (alive.empty())
        throw StateReconstructionFailed("eval_solution: every arriving characteristic was absorbed");

    // Right of every tracked curve the rightmost surviving sheet is the
    // selected one (leftover compressed-ramp sheets ride below it); left of
    // the curves and in the wedges between them the leftmost survivor is,
    // which is also the deterministic convention in untracked pockets.
    const double foot = (any_active && x > z_hi) ? alive.back() : alive.front();
    return sol.v0(foot);
}

double potential(const FrontTrackedSolution& sol, double t, double x) {
    if (!(t >= 0.0)) throw ConfigError("potential: need t >= 0");

    // anchor far enough left that no wave has reached it
    const double reach = max_wave_speed(sol.flux, -2.0, 2.0);
    const double x_a = (sol.v0.knots.empty() ? 0.0 : sol.v0.knots.front()) - 1.0 - reach * t;
    const double u0_a = -(x_a >= 0.0 ? sol.v0.integral(0.0, x_a) : -sol.v0.integral(x_a, 0.0));
    double value = u0_a + t * sol.flux.value(sol.v0.left_value);
    if (x <= x_a) return value + (x_a - x) * sol.v0.left_value;

    // split the integration at active shocks
    std::vector<double> cuts = {x_a};
    for (const auto& curve : sol.shocks) {
        if (curve.active_at(t)) {
            const double z = curve.position_at(t);
            if (z > x_a && z < x) cuts.push_back(z);
        }
    }
    cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());

    const double nudge = 1e-9;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i] + (i == 0 ? 0.0 : nudge);
        const double hi = cuts[i + 1] - (i + 2 == cuts.size() ? 0.0 : nudge);
        if (lo >= hi) continue;
        value += integrate_adaptive(
            [&](double xi) { return -eval_solution(sol, t, xi); }, lo, hi, 1e-10);
    }
    return value;
}

// ---- admissibility --------------------------------------------------------

ChordCheck oleinik_chord_check(const PiecewiseCubicFlux& flux, double v_minus, double v_plus,
                               int n_k, double tol) {
    if (n_k < 1) throw ConfigError("oleinik_chord_check: need n_k >= 1");
    if (std::abs(v_plus - v_minus) < kDegenerate)
        throw DegenerateJump("oleinik_chord_check: degenerate jump");

    // The slope form covers both orientations at once: admissibility is
    // (H(vp)-H(k))/(vp-k) <= s <= (H(k)-H(vm))/(k-vm) for every interior k,
    // whichever way the jump goes.
    const double s = rh_speed(flux, v_minus, v_plus);
    const double Hm = flux.value(v_minus), Hp = flux.value(v_plus);

    ChordCheck out;
    out.worst_margin = -std::numeric_limits<double>::infinity();
    out.records.reserve(static_cast<std::size_t>(n_k));
    for (int j = 1; j <= n_k; ++j) {
        ChordRecord r;
        r.k = v_minus + (v_plus - v_minus) * j / (n_k + 1);
        const double Hk = flux.value(r.k);
        r.left_excess = (Hp - Hk) / (v_plus - r.k) - s;
        r.right_excess = s - (Hk - Hm) / (r.k - v_minus);
        r.violated = r.left_excess > tol || r.right_excess > tol;
        if (r.violated) out.admissible = false;
        const double m = std::max(r.left_excess, r.right_excess);
        if (m > out.worst_margin) { out.worst_margin = m; out.worst_k = r.k; }
        out.records.push_back(r);
    }
    return out;
}

std::pair<double, double> chord_violation_margin(const PiecewiseCubicFlux& flux,
                                                 double v_minus, double v_plus) {
    if (std::abs(v_plus - v_minus) < kDegenerate) return {0.0, v_minus};
    const double lo = std::min(v_minus, v_plus);
    const double hi = std::max(v_minus, v_plus);
    const double s = (flux.value(v_plus) - flux.value(v_minus)) / (v_plus - v_minus);
    // upward jumps need the graph above the chord, downward below; the signed
    // chord gap is polynomial, so its extrema are exactly enumerable
    const double sign = v_minus < v_plus ? 1.0 : -1.0;
    auto gap = [&](double k) {
        const double line = flux.value(v_minus) + s * (k - v_minus);
        return sign * (line - flux.value(k));
    };

    double best = 0.0, best_k = lo;
    auto consider = [&](double k) {
        const double g = gap(k);
        if (g > best) { best = g; best_k = k; }
    };
    const std::size_t nseg = flux.segments.size();
    for (std::size_t i = 0; i < nseg; ++i) {
        const double seg_lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                     : flux.breakpoints[i - 1];
        const double seg_hi = i + 1 == nseg ? std::numeric_limits<double>::infinity()
                                            : flux.breakpoints[i];
        const double a = std::max(lo, seg_lo);
        const double b = std::min(hi, seg_hi);
        if (a >= b) continue;
        consider(a);
        consider(b);
        // critical points: H'(k) = s
        const auto& seg = flux.segments[i];
        if (seg.c3 != 0.0) {
            const double disc = 4.0 * seg.c2 * seg.c2 - 12.0 * seg.c3 * (seg.c1 - s);
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                for (double r : {(-2.0 * seg.c2 + sq) / (6.0 * seg.c3),
                                 (-2.0 * seg.c2 - sq) / (6.0 * seg.c3)}) {
                    if (r > a && r < b) consider(r);
                }
            }
        } else if (seg.c2 != 0.0) {
            const double r = (s - seg.c1) / (2.0 * seg.c2);
            if (r > a && r < b) consider(r);
        }
    }
    return {best, best_k};
}

namespace {

EntropyCertificate certificate_at(const PiecewiseCubicFlux& flux, const ShockCurve& curve,
                                  const ShockSample& s, double k) {
    EntropyCertificate cert;
    cert.curve = curve.name;
    cert.t = s.t;
    cert.z = s.z;
    cert.v_minus = s.v_minus;
    cert.v_plus = s.v_plus;
    cert.k = k;
    const double slope = (flux.value(s.v_plus) - flux.value(s.v_minus)) / (s.v_plus - s.v_minus);
    cert.chord_slope = slope;
    cert.left_excess = (flux.value(s.v_plus) - flux.value(k)) / (s.v_plus - k) - slope;
    cert.right_excess = slope - (flux.value(k) - flux.value(s.v_minus)) / (k - s.v_minus);
    cert.margin = std::max(cert.left_excess, cert.right_excess);
    return cert;
}

}  // namespace

CertificateScan entropy_certificate(const FrontTrackedSolution& sol) {
    const double tol = 1e-11;
    bool found = false;
    EntropyCertificate onset;
    onset.t = std::numeric_limits<double>::infinity();

    for (const auto& curve : sol.shocks) {
        for (const auto& s : curve.samples) {
            if (std::abs(s.v_plus - s.v_minus) < kDegenerate) continue;
            const auto [margin, karg] = chord_violation_margin(sol.flux, s.v_minus, s.v_plus);
            if (margin > tol) {
                if (s.t < onset.t) onset = certificate_at(sol.flux, curve, s, karg);
                found = true;
                break;  // samples are time-ordered; this curve's onset is set
            }
        }
    }
    if (!found)
        throw NoViolationFound("entropy_certificate: every tracked jump is chord-admissible");

    CertificateScan scan;
    scan.onset = onset;
    scan.has_witness = false;
    scan.witness = onset;
    const double t3 = sol.constants.hump_crossing;
    if (std::isfinite(t3)) {
        for (const auto& curve : sol.shocks) {
            if (!curve.active_at(t3)) continue;
            const auto& s = curve.sample_near(t3);
            if (std::abs(s.v_plus - s.v_minus) < kDegenerate) continue;
            const auto probe = certificate_at(sol.flux, curve, s, 0.0);
            if (probe.margin > tol) {
                scan.witness = probe;
                scan.has_witness = true;
                break;
            }
        }
    }
    return scan;
}

RhResidualReport rh_residual(const FrontTrackedSolution& sol, std::size_t skip) {
    RhResidualReport rep;
    for (const auto& curve : sol.shocks) {
        double worst = 0.0;
        const auto& s = curve.samples;
        for (std::size_t i = 1 + skip; i + 1 < s.size(); ++i) {
            // three-point derivative on a possibly nonuniform stencil, in
            // centered coordinates: the raw Lagrange weights cancel the large
            // position level through a difference of near-equal times, which
            // loses a half ulp whenever 2t - t_prev crosses a binade and puts
            // an O(ulp(t)/h^2 z) floor under the residual
            const double ta = s[i - 1].t - s[i].t, tb = s[i + 1].t - s[i].t;
            const double za = s[i - 1].z - s[i].z, zb = s[i + 1].z - s[i].z;
            const double d = (zb * ta * ta - za * tb * tb) / (ta * tb * (ta - tb));
            worst = std::max(worst, std::abs(d - s[i].speed));
        }
        rep.per_curve.push_back(worst);
        rep.max_residual = std::max(rep.max_residual, worst);
    }
    return rep;
}

}  // namespace hjselect
