#include "wireorbit/periodmap.hpp"
#include "wireorbit/rootfind.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wireorbit {
namespace {

double w_of(double r, const PhysParams& p) { return p.pz + p.coupling() * std::log(r); }

void require_radius(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("periodmap: r must be > 0");
}

// Solves g(r) = gt on one side of the well. side > 0 works on [r_bar, r_hi]
// where g increases, side < 0 on [r_lo, r_bar] where g decreases with r.
double solve_well_radius(double gt, int side, double inner, double outer,
                         const PhysParams& p, const Equilibrium& eq, double warm) {
    auto fn = [&](double r) { return profile_g(r, p, eq) - gt; };
    auto dfn = [&](double r) { return profile_g_derivatives(r, p).d1; };
    const double lo = side > 0 ? eq.r_bar : inner;
    const double hi = side > 0 ? outer : eq.r_bar;
    return rootfind::newton_bisect(fn, dfn, lo, hi, 1e-15, 0.0, 200, warm);
}

}  // namespace

double profile_f(double r, const PhysParams& params) {
    require_radius(r);
    const double w = w_of(r, params);
    const double lr = params.L / r;
    return 1.0 + w * w + lr * lr;
}

double profile_g(double r, const PhysParams& params, const Equilibrium& eq) {
    require_radius(r);
    // (f(r) - f(r_bar))/2 written as a product of differences so the value
    // stays accurate to O(eps/(r - r_bar)) near the minimum
    const double c = params.coupling();
    const double u = r - eq.r_bar;
    const double dw = c * std::log1p(u / eq.r_bar);
    const double w_bar = w_of(eq.r_bar, params);
    const double w = w_bar + dw;
    const double lsq = params.L * params.L;
    return 0.5 * (dw * (w + w_bar) - lsq * u * (r + eq.r_bar) / (r * r * eq.r_bar * eq.r_bar));
}

GDerivatives profile_g_derivatives(double r, const PhysParams& params) {
    require_radius(r);
    const double c = params.coupling();
    const double w = w_of(r, params);
    const double lsq = params.L * params.L;
    const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r;
    const double d1 = c * w / r - lsq / r3;
    const double d2 = (c * c - c * w) / r2 + 3.0 * lsq / r4;
    const double d3 = (-3.0 * c * c + 2.0 * c * w) / r3 - 12.0 * lsq / r5;
    return GDerivatives{d1, d2, d3};
}

TurningPoints turning_points(double H, const PhysParams& params) {
    const auto eq = equilibrium(params);
    if (!(H > eq.H0))
        throw std::invalid_argument("turning_points: H <= H0, no closed orbit");

    const double gt = 0.5 * (H - eq.H0) * (H + eq.H0);
    auto fn = [&](double r) { return profile_g(r, params, eq) - gt; };

    double lo = eq.r_bar;
    while (fn(lo) < 0.0) lo *= 0.5;
    double hi = eq.r_bar;
    while (fn(hi) < 0.0) hi *= 2.0;

    const double r_a = solve_well_radius(gt, -1, lo, hi, params, eq, std::nan(""));
    const double r_b = solve_well_radius(gt, +1, lo, hi, params, eq, std::nan(""));
    return TurningPoints{r_a, r_b, H};
}

double period(double H, const PhysParams& params, double quad_tol) {
    const auto eq = equilibrium(params);
    if (!(H > eq.H0)) throw std::invalid_argument("period: H <= H0, no closed orbit");

    const auto tp = turning_points(H, params);
    const double span = 0.5 * (H - eq.H0) * (H + eq.H0);  // g at the turning points
    const double sqrt_span = std::sqrt(2.0 * span);
    const double rho0 = 1.0 / std::sqrt(profile_g_derivatives(eq.r_bar, params).d2);

    auto quadrature = [&](int n) {
        double sum = 0.0;
        double warm_pos = tp.r_b, warm_neg = std::nan("");
        for (int k = 1; k <= n; ++k) {
            const double y = std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
            const double ay = std::abs(y);
            if (ay < 1e-12) { sum += rho0; continue; }
            const double gt = y * y * span;
            double rho;
            if (y > 0.0) {
                const double r = solve_well_radius(gt, +1, tp.r_a, tp.r_b, params, eq, warm_pos);
                warm_pos = r;
                rho = ay * sqrt_span / profile_g_derivatives(r, params).d1;
            } else {
                if (!std::isfinite(warm_neg))
                    warm_neg = eq.r_bar - ay * (eq.r_bar - tp.r_a);
                const double r = solve_well_radius(gt, -1, tp.r_a, tp.r_b, params, eq, warm_neg);
                warm_neg = r;
                rho = -ay * sqrt_span / profile_g_derivatives(r, params).d1;
            }
            sum += rho;
        }
        return 2.0 * std::numbers::pi / n * H * sum;
    };

    double prev = quadrature(32);
    for (int n = 64; n <= 32768; n *= 2) {
        const double cur = quadrature(n);
        if (std::abs(cur - prev) <= quad_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    throw std::runtime_error("period: quadrature did not converge");
}

MinPeriod min_period(const PhysParams& params) {
    const auto eq = equilibrium(params);
    return MinPeriod{eq.T0_lin, eq.T0_alt};
}

double invert_period(double T, const PhysParams& params, double rel_tol) {
    const auto eq = equilibrium(params);
    if (!(T > eq.T0_lin))
        throw std::invalid_argument(
            "invert_period: T <= T0, no resonant energy exists");

    const double quad_tol = std::max(1e-13, 0.02 * rel_tol);

    // lower bracket end: shrink toward H0 until the period drops below T
    double dlo = std::max(1e-6 * eq.H0, 1e-12);
    while (period(eq.H0 + dlo, params, quad_tol) >= T) {
        dlo *= 0.1;
        if (dlo < 1e-14 * eq.H0)
            throw std::runtime_error("invert_period: T too close to the minimal period");
    }
    double dhi = std::max(2.0 * dlo, 0.5);
    while (period(eq.H0 + dhi, params, quad_tol) < T) {
        dhi *= 2.0;
        if (dhi > 1e9)
            throw std::runtime_error("invert_period: bracket growth failed");
    }

    double lo = eq.H0 + dlo, hi = eq.H0 + dhi;
    double flo = period(lo, params, quad_tol) - T;
    double fhi = period(hi, params, quad_tol) - T;
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        double x;
        const double denom = fhi - flo;
        if (denom != 0.0) {
            x = hi - fhi * (hi - lo) / denom;
            const double margin = 1e-3 * (hi - lo);
            if (!(x > lo + margin && x < hi - margin)) x = 0.5 * (lo + hi);
        } else {
            x = 0.5 * (lo + hi);
        }
        const double fx = period(x, params, quad_tol) - T;
        if (fx == 0.0 || std::abs(fx) <= rel_tol * T) return x;
        if ((fx > 0.0) == (fhi > 0.0)) { hi = x; fhi = fx; }
        else                           { lo = x; flo = fx; }
        if (hi - lo <= 1e-15 * hi) return 0.5 * (lo + hi);
    }
    throw std::runtime_error("invert_period: iteration did not converge");
}

PeriodMapTable build_table(const PhysParams& params, double H_max, int n_points,
                           double first_offset) {
    const auto eq = equilibrium(params);
    if (!(H_max > eq.H0)) throw std::invalid_argument("build_table: H_max <= H0");
    if (n_points < 2) throw std::invalid_argument("build_table: need n_points >= 2");
    if (!(first_offset > 0.0) || !(first_offset < H_max - eq.H0))
        throw std::invalid_argument("build_table: bad first_offset");

    PeriodMapTable table;
    table.H0 = eq.H0;
    table.T0 = eq.T0_lin;
    table.entries.reserve(n_points);

    const double ratio =
        std::pow((H_max - eq.H0) / first_offset, 1.0 / static_cast<double>(n_points - 1));
    for (int i = 0; i < n_points; ++i) {
        const double H = eq.H0 + first_offset * std::pow(ratio, i);
        const auto tp = turning_points(H, params);
        const double T = period(H, params);
        if (!table.entries.empty() && !(T > table.entries.back().T)) {
            std::ostringstream msg;
            msg << "build_table: period map not strictly increasing between H = "
                << table.entries.back().H << " (T = " << table.entries.back().T
                << ") and H = " << H << " (T = " << T << ")";
            throw std::runtime_error(msg.str());
        }
        table.entries.push_back(PeriodMapEntry{H, T, tp.r_a, tp.r_b});
    }
    return table;
}

}  // namespace wireorbit
