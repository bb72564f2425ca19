#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "hjselect/errors.hpp"

namespace hjselect {

// ---- exact rational arithmetic --------------------------------------------
//
// Small int64 fraction type used wherever a quantity is known to be rational
// and we want to carry it exactly (flux coefficients, derived constants).
// Overflow is the caller's problem; magnitudes here stay tiny.

struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Fraction() = default;
    constexpr Fraction(std::int64_t n) : num(n), den(1) {}
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw NumericalError("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
    friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
    friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
    friend Fraction operator/(Fraction a, Fraction b) {
        if (b.num == 0) throw NumericalError("Fraction: division by zero");
        return {a.num * b.den, a.den * b.num};
    }
    friend Fraction operator-(Fraction a) { return {-a.num, a.den}; }
    friend bool operator==(const Fraction& a, const Fraction& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
};

// ---- 1-D optimization and root finding ------------------------------------

// Golden-section maximization on [lo, hi]. Assumes g is unimodal there;
// callers that cannot guarantee unimodality must pre-scan (see flux module).
// Returns the abscissa; narrows the bracket to width <= tol.
template <typename G>
double golden_section_max(G&& g, double lo, double hi, double tol) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > tol) {
        if (gc >= gd) {
            b = d; d = c; gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c; c = d; gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

// Bisection for a sign change of f on [lo, hi]. Requires f(lo) and f(hi) of
// opposite sign (zero counts as either). Narrows to |hi-lo| <= tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // spacing exhausted
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    return 0.5 * (lo + hi);
}

// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
namespace detail {
template <typename F>
double simpson_rec(F& f, double a, double fa, double b, double fb,
                   double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <typename F>
double integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 28) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

// ---- misc -----------------------------------------------------------------

inline double sq(double x) { return x * x; }

// Linear interpolation of (xs, ys) at x, clamped to the end values.
// xs must be strictly increasing.
inline double interp_clamped(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

// FNV-1a over a byte string; used to stamp configs into manifests.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Number of worker threads: HJSELECT_THREADS if set, else min(4, hardware).
inline unsigned worker_threads() {
    if (const char* env = std::getenv("HJSELECT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::min(4u, hw == 0 ? 1u : hw);
}

// Runs body(i) for i in [0, n). Work is split into contiguous chunks, one per
// worker; each worker writes only its own indices, so results are identical
// to the serial order regardless of thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const unsigned workers = worker_threads();
    if (workers <= 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace hjselect
