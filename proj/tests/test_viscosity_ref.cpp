#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hjselect/correspondence.hpp"
#include "hjselect/errors.hpp"
#include "hjselect/godunov.hpp"
#include "hjselect/hopf_lax.hpp"
#include "oracles.hpp"

using namespace hjselect;

namespace {

// independent piecewise evaluation of the counterexample flux via the
// oracle fraction coefficients
double oracle_flux(double p) {
    if (p < -0.5) return oracle::left_piece().value_d(p);
    if (p <= 0.5) return oracle::middle_piece().value_d(p);
    return oracle::right_piece().value_d(p);
}

double scan_extremum(double a, double b, bool want_max) {
    const int n = 20000;
    double best = oracle_flux(a);
    for (int i = 1; i <= n; ++i) {
        const double v = oracle_flux(a + (b - a) * i / n);
        if (want_max ? v > best : v < best) best = v;
    }
    return best;
}

PiecewiseLinearProfile riemann(double vl, double vr) {
    PiecewiseLinearProfile p;
    p.knots = {0.0};
    p.values = {vr};
    p.left_value = vl;
    p.right_value = vr;
    return p;
}

// convex control data: decreasing ramp from 1 to -1 across [-1, 1]
PiecewiseLinearProfile control_ramp() {
    PiecewiseLinearProfile p;
    p.knots = {-1.0, 1.0};
    p.values = {1.0, -1.0};
    p.left_value = 1.0;
    p.right_value = -1.0;
    return p;
}

// its potential, u0' = -v0: x^2/2 in the ramp, slope -+1 outside
double control_potential(double x) {
    if (x <= -1.0) return -x - 0.5;
    if (x >= 1.0) return x - 0.5;
    return 0.5 * x * x;
}

}  // namespace

TEST_CASE("godunov flux: exact landmark cases") {
    const auto flux = counterexample_flux();

    // upward jump across the convex middle: minimum at p = 0
    CHECK(godunov_flux(flux, -0.3, 0.4) == 0.0);
    // downward jump across the right hump: maximum at the hump
    CHECK(std::abs(godunov_flux(flux, 1.3, 0.6) - oracle::hump_value()) < 1e-15);
    // monotone stretch, no interior extremum: endpoint value
    CHECK(godunov_flux(flux, 0.6, 1.0) == std::min(oracle_flux(0.6), oracle_flux(1.0)));
    // equal states
    CHECK(godunov_flux(flux, 0.77, 0.77) == flux.value(0.77));
    // wide spans across several segments
    CHECK(godunov_flux(flux, -1.3, 1.1) == 0.0);
    CHECK(std::abs(godunov_flux(flux, 1.1, -1.3) - oracle::hump_value()) < 1e-15);
}

TEST_CASE("godunov flux agrees with a brute-force scan on random pairs") {
    const auto flux = counterexample_flux();
    std::mt19937 rng(20260821u);
    std::uniform_real_distribution<double> dist(-1.6, 1.6);
    for (int k = 0; k < 200; ++k) {
        const double a = dist(rng), b = dist(rng);
        const double exact = godunov_flux(flux, a, b);
        const double scan = a <= b ? scan_extremum(a, b, false) : scan_extremum(b, a, true);
        CHECK(std::abs(exact - scan) < 1e-7);
    }
}

TEST_CASE("wave speed bound is exact") {
    const auto flux = counterexample_flux();
    CHECK(max_wave_speed(flux, -1.5, 1.5) == 2.25);
    CHECK(max_wave_speed(flux, -0.5, 0.5) == 0.5);
    const auto quad = quadratic_flux();
    CHECK(max_wave_speed(quad, -1.0, 1.0) == 1.0);
}

TEST_CASE("godunov: stationary shock for the convex control") {
    const auto quad = quadratic_flux();
    const auto res = godunov_solve(quad, riemann(1.0, -1.0), -3.0, 3.0, 1200, 1.0, 0.45, {1.0});

    REQUIRE(res.grid.slices() == 1);
    const std::size_t it = 0;
    // plateaus are clean away from the (stationary) shock at x = 0
    CHECK(std::abs(res.grid.sample_slice(it, -1.0) - 1.0) < 1e-6);
    CHECK(std::abs(res.grid.sample_slice(it, 1.0) + 1.0) < 1e-6);
    // the smeared interface straddles x = 0
    double cross = 0.0;
    for (std::size_t j = 1; j < res.grid.columns; ++j) {
        if (res.grid.at(it, j - 1) > 0.0 && res.grid.at(it, j) <= 0.0) {
            cross = 0.5 * (res.grid.x_at(j - 1) + res.grid.x_at(j));
            break;
        }
    }
    CHECK(std::abs(cross - oracle::kControlShockSpeed * 1.0) < 2.0 * res.grid.dx);
    // discrete max principle and conservation
    CHECK(res.max_seen <= 1.0 + 1e-12);
    CHECK(res.min_seen >= -1.0 - 1e-12);
    CHECK(res.mass_drift < 1e-10 * static_cast<double>(res.steps));
}

TEST_CASE("godunov: rarefaction, not an expansion shock") {
    const auto quad = quadratic_flux();
    const auto res = godunov_solve(quad, riemann(-1.0, 1.0), -4.0, 4.0, 1600, 1.0, 0.45, {1.0});
    for (double x : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
        CHECK(std::abs(res.grid.sample_slice(0, x) - x) < 0.02);  // fan v = x/t at t = 1
    }
    CHECK(std::abs(res.grid.sample_slice(0, -1.5) + 1.0) < 1e-3);
    CHECK(std::abs(res.grid.sample_slice(0, 1.5) - 1.0) < 1e-3);
}

TEST_CASE("godunov: CFL step and stored slice times") {
    const auto flux = counterexample_flux();
    PiecewiseLinearProfile ramp;
    ramp.knots = {-1.5, 1.5};
    ramp.values = {-1.5, 1.5};
    ramp.left_value = -1.5;
    ramp.right_value = 1.5;
    const std::vector<double> outs = {0.0, 0.025, 0.05};
    const auto res = godunov_solve(flux, ramp, -2.5, 2.5, 500, 0.05, 0.45, outs);

    CHECK(res.max_speed == 2.25);
    CHECK(res.dt == 0.45 * 0.01 / 2.25);
    REQUIRE(res.grid.slices() == 3);
    for (std::size_t i = 0; i < outs.size(); ++i) CHECK(res.grid.times[i] == outs[i]);
    CHECK(res.grid.kind == GridKind::cell_average);
    CHECK(res.grid.columns == 500);
    CHECK(res.mass_drift < 1e-10 * static_cast<double>(res.steps));
}

TEST_CASE("godunov: tight domain raises UnpaddedDomain") {
    const auto quad = quadratic_flux();
    PiecewiseLinearProfile p = riemann(1.0, -1.0);
    // a stationary shock never reaches the edges; a spreading fan does
    PiecewiseLinearProfile fan = riemann(-1.0, 1.0);
    CHECK_THROWS_AS(godunov_solve(quad, fan, -0.6, 0.6, 200, 2.0, 0.45, {2.0}), UnpaddedDomain);
    (void)p;
}

TEST_CASE("hopf-lax: affine data propagates exactly") {
    const auto quad = quadratic_flux();
    HopfLaxOptions opt;
    opt.y_lo = -8.0; opt.y_hi = 8.0; opt.p_lo = -2.0; opt.p_hi = 2.0;
    auto u0 = [](double y) { return 0.3 * y; };
    // u = 0.3 x + t H(-0.3)
    for (auto [t, x] : {std::pair{0.7, 1.1}, {0.3, -2.0}}) {
        const double got = hopf_lax_eval(quad, u0, t, x, opt);
        CHECK(std::abs(got - (0.3 * x + t * 0.045)) < 1e-7);
    }
    // same data under the counterexample flux, gradients confined to the
    // convex middle
    const auto flux = counterexample_flux();
    opt.p_lo = -0.5; opt.p_hi = 0.5;
    const double got = hopf_lax_eval(flux, u0, 0.5, 0.2, opt);
    CHECK(std::abs(got - (0.3 * 0.2 + 0.5 * 0.045)) < 1e-7);
}

TEST_CASE("hopf-lax: parabola closed form") {
    const auto quad = quadratic_flux();
    // the gradient bracket must dominate the data slopes over the whole
    // search window, or distant feet look spuriously good
    HopfLaxOptions opt;
    opt.y_lo = -5.0; opt.y_hi = 5.0; opt.p_lo = -6.0; opt.p_hi = 6.0;
    auto u0 = [](double y) { return 0.5 * y * y; };
    for (double t : {0.3, 0.6}) {
        for (double x : {-0.8, 0.0, 1.2}) {
            const double got = hopf_lax_eval(quad, u0, t, x, opt);
            CHECK(std::abs(got - x * x / (2.0 * (1.0 - t))) < 1e-6);
        }
    }
}

TEST_CASE("hopf-lax agrees with classical characteristics before focusing") {
    const auto flux = counterexample_flux();
    auto u0 = [](double y) { return 0.4 * (1.0 - std::cos(y)); };
    // conserved field v0 = -u0' = -0.4 sin; characteristics X = x* + t H'(v0)
    auto v0 = [](double y) { return -0.4 * std::sin(y); };
    const double t = 0.5;  // well before the first focusing at t = 2.5
    HopfLaxOptions opt;
    opt.p_lo = -0.5; opt.p_hi = 0.5;
    for (double x : {-1.5, -0.4, 0.3, 2.0}) {
        opt.y_lo = x - 3.0; opt.y_hi = x + 3.0;
        const double hl = hopf_lax_eval(flux, u0, t, x, opt);
        // invert the characteristic map (monotone pre-focus; H' = id here)
        const double foot = bisect([&](double s) { return s + t * flux.deriv(v0(s)) - x; },
                                   x - 1.0, x + 1.0, 1e-13);
        const double v = v0(foot);
        const double classical = u0(foot) + t * (flux.value(v) - v * flux.deriv(v));
        CHECK(std::abs(hl - classical) < 1e-6);
    }
}

TEST_CASE("hopf-lax guards its search windows") {
    const auto quad = quadratic_flux();
    HopfLaxOptions opt;
    opt.y_lo = -5.0; opt.y_hi = 5.0; opt.p_lo = -6.0; opt.p_hi = 6.0;
    auto u0 = [](double y) { return 0.5 * y * y; };
    // maximizing foot for t=0.9, x=3 sits at x/(1-t) = 30, far outside
    CHECK_THROWS_AS(hopf_lax_eval(quad, u0, 0.9, 3.0, opt), SearchIntervalTooSmall);

    const auto flux = counterexample_flux();
    HopfLaxOptions bad;
    bad.y_lo = -5.0; bad.y_hi = 5.0; bad.p_lo = -1.5; bad.p_hi = 1.5;
    CHECK_THROWS_AS(hopf_lax_eval(flux, u0, 0.5, 0.0, bad), NonConcaveObjective);
}

TEST_CASE("correspondence: exact round trip through the potential") {
    // nodal potential on [0, 3]: slope -0.25 region near the anchor, cubic
    // bump further right
    GridSolution u;
    u.kind = GridKind::nodal;
    u.x_min = 0.0;
    u.dx = 3.0 / 300.0;
    u.times = {0.0};
    u.columns = 301;
    u.data.resize(301);
    auto u_exact = [](double x) { return 0.25 * x + (x > 1.0 ? std::pow(x - 1.0, 3) : 0.0); };
    for (std::size_t j = 0; j < 301; ++j) u.data[j] = u_exact(u.x_at(j));

    const auto v = hj_to_cl(u);
    CHECK(v.kind == GridKind::cell_average);
    CHECK(v.columns == 300);

    CorrespondenceAnchor anchor;
    anchor.x = 0.0;
    anchor.state = -0.25;  // v = -u_x
    anchor.u0_value = 0.0;
    const auto u2 = cl_to_hj(v, anchor, quadratic_flux());
    REQUIRE(u2.columns == u.columns);
    for (std::size_t j = 0; j < u.columns; ++j)
        CHECK(std::abs(u2.at(0, j) - u.at(0, j)) < 1e-12);
}

TEST_CASE("correspondence: anchor value advances at rate H(state)") {
    const auto flux = counterexample_flux();
    GridSolution v;
    v.kind = GridKind::cell_average;
    v.x_min = 0.0;
    v.dx = 0.1;
    v.times = {0.0, 0.8};
    v.columns = 50;
    v.data.assign(2 * 50, -0.25);

    CorrespondenceAnchor anchor;
    anchor.x = 1.0;  // node 10
    anchor.state = -0.25;
    anchor.u0_value = 7.0;
    const auto u = cl_to_hj(v, anchor, flux);
    CHECK(std::abs(u.at(0, 10) - 7.0) < 1e-14);
    CHECK(std::abs(u.at(1, 10) - (7.0 + 0.8 * flux.value(-0.25))) < 1e-14);
    // u_x = -v exactly
    CHECK(std::abs((u.at(1, 20) - u.at(1, 19)) / 0.1 - 0.25) < 1e-12);
}

TEST_CASE("correspondence: invaded anchor is detected") {
    GridSolution v;
    v.kind = GridKind::cell_average;
    v.x_min = 0.0;
    v.dx = 0.1;
    v.times = {0.0};
    v.columns = 50;
    v.data.assign(50, -0.25);
    v.data[10] = -0.25 + 1e-6;  // wave arrives at the anchor's right cell

    CorrespondenceAnchor anchor;
    anchor.x = 1.0;
    anchor.state = -0.25;
    anchor.u0_value = 0.0;
    CHECK_THROWS_AS(cl_to_hj(v, anchor, quadratic_flux()), AnchorInvaded);
}

TEST_CASE("grid potential from godunov matches hopf-lax for the convex control") {
    const auto quad = quadratic_flux();
    const std::vector<double> outs = {0.5, 2.0};
    const auto res = godunov_solve(quad, control_ramp(), -4.0, 4.0, 1600, 2.0, 0.45, outs);

    CorrespondenceAnchor anchor;
    anchor.x = -3.0;
    anchor.state = 1.0;
    anchor.u0_value = control_potential(-3.0);
    const auto u = cl_to_hj(res.grid, anchor, quad);

    HopfLaxOptions opt;
    opt.y_lo = -6.0; opt.y_hi = 6.0; opt.p_lo = -3.0; opt.p_hi = 3.0;

    // t = 0.5: still classical; u = x^2/(2(1-t)), valid for |x| <= 1-t
    for (double x : {-0.4, 0.0, 0.3}) {
        const double closed = x * x / (2.0 * (1.0 - 0.5));
        const double hl = hopf_lax_eval(quad, control_potential, 0.5, x, opt);
        CHECK(std::abs(hl - closed) < 1e-6);
        CHECK(std::abs(u.sample(0.5, x) - closed) < 0.01);
    }
    // t = 2: entropic shock at x = 0; away from it, u = -+x + t/2 - 1/2
    for (double x : {-1.5, 1.5}) {
        const double closed = std::abs(x) + 1.0 - 0.5;
        const double hl = hopf_lax_eval(quad, control_potential, 2.0, x, opt);
        CHECK(std::abs(hl - closed) < 1e-6);
        CHECK(std::abs(u.sample(2.0, x) - closed) < 0.02);
    }
    // at the shock the potential is continuous: u(2, 0) = (t-1)/2 = 0.5
    CHECK(std::abs(u.sample(2.0, 0.0) - 0.5) < 0.02);
    CHECK(std::abs(hopf_lax_eval(quad, control_potential, 2.0, 0.0, opt) - 0.5) < 1e-6);
}
