#include "hjselect/hopf_lax.hpp"

#include <cmath>

#include "hjselect/errors.hpp"

namespace hjselect {

double hopf_lax_eval(const PiecewiseCubicFlux& flux, const std::function<double(double)>& u0,
                     double t, double x, const HopfLaxOptions& opt) {
    if (!(opt.y_lo < opt.y_hi)) throw ConfigError("hopf_lax_eval: need y_lo < y_hi");
    if (opt.coarse_points < 8) throw ConfigError("hopf_lax_eval: need at least 8 scan points");
    if (!(t >= 0.0)) throw ConfigError("hopf_lax_eval: need t >= 0");
    if (t == 0.0) return u0(x);

    auto variational = [&](double y) {
        const double s = (x - y) / t;
        return u0(y) - t * legendre_conjugate(flux, s, opt.p_lo, opt.p_hi, opt.tol);
    };

    // coarse scan: the objective need not be concave in y, only continuous
    const int n = opt.coarse_points;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double y = opt.y_lo + (opt.y_hi - opt.y_lo) * i / (n - 1);
        const double val = variational(y);
        if (val > best) { best = val; best_i = i; }
    }
    if (best_i == 0 || best_i == n - 1)
        throw SearchIntervalTooSmall("hopf_lax_eval: maximizing foot at the window edge");

    const double h = (opt.y_hi - opt.y_lo) / (n - 1);
    const double a = opt.y_lo + h * (best_i - 1);
    const double b = opt.y_lo + h * (best_i + 1);
    const double y_star = golden_section_max(variational, a, b, opt.tol);
    return variational(y_star);
}

}  // namespace hjselect
