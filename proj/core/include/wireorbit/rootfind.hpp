#pragma once
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace wireorbit::rootfind {

/**
 * Bisection-safeguarded Newton on a bracketed root.
 *
 * The bracket [lo, hi] must satisfy f(lo)*f(hi) <= 0. Newton steps are taken
 * whenever they stay inside the current bracket, otherwise the step falls
 * back to bisection. Converges to |hi - lo| <= rtol*|x| + atol.
 */
inline double newton_bisect(const std::function<double(double)>& f,
                            const std::function<double(double)>& df,
                            double lo, double hi,
                            double rtol = 1e-14, double atol = 0.0,
                            int max_iter = 200,
                            double warm_start = std::nan("")) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("newton_bisect: root not bracketed");

    double x = (std::isfinite(warm_start) && warm_start > lo && warm_start < hi)
                   ? warm_start
                   : 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 0; it < max_iter; ++it) {
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) { hi = x; fhi = fx; }
        else                           { lo = x; flo = fx; }

        if (std::abs(hi - lo) <= rtol * std::abs(x) + atol) return x;

        double x_next = x;
        const double d = df(x);
        bool ok = false;
        if (d != 0.0 && std::isfinite(d)) {
            x_next = x - fx / d;
            ok = x_next > lo && x_next < hi;
        }
        if (!ok) x_next = 0.5 * (lo + hi);
        x = x_next;
        fx = f(x);
    }
    return x;
}

/// Derivative-free variant: secant steps safeguarded by bisection.
inline double secant_bisect(const std::function<double(double)>& f,
                            double lo, double hi,
                            double rtol = 1e-14, double atol = 0.0,
                            int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("secant_bisect: root not bracketed");

    for (int it = 0; it < max_iter; ++it) {
        double x;
        const double denom = fhi - flo;
        if (denom != 0.0) {
            x = hi - fhi * (hi - lo) / denom;
            const double margin = 0.01 * (hi - lo);
            if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (fhi > 0.0)) { hi = x; fhi = fx; }
        else                           { lo = x; flo = fx; }
        if (std::abs(hi - lo) <= rtol * std::abs(x) + atol) return 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

/**
 * Grows a bracket geometrically from a seed until f changes sign.
 * Direction +1 grows upward (hi *= factor), -1 downward (lo *= 1/factor).
 * Throws std::runtime_error if no sign change is found.
 */
inline std::pair<double, double> grow_bracket(const std::function<double(double)>& f,
                                              double seed, int direction,
                                              double factor = 2.0, int max_grow = 200) {
    double a = seed;
    double fa = f(a);
    if (fa == 0.0) return {a, a};
    double b = a;
    for (int i = 0; i < max_grow; ++i) {
        b = direction > 0 ? b * factor : b / factor;
        const double fb = f(b);
        if (fb == 0.0) return {b, b};
        if ((fa > 0.0) != (fb > 0.0)) return direction > 0 ? std::pair{a, b} : std::pair{b, a};
        a = b;
        fa = fb;
    }
    throw std::runtime_error("grow_bracket: no sign change after " +
                             std::to_string(max_grow) + " expansions");
}

}  // namespace wireorbit::rootfind
