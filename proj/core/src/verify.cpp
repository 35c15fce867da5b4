#include "wireorbit/verify.hpp"
#include "wireorbit/model.hpp"
#include "wireorbit/periodmap.hpp"

#include <cmath>
#include <stdexcept>

namespace wireorbit {
namespace {

double s_value(double r, const PhysParams& p, const Equilibrium& eq) {
    if (std::abs(r - eq.r_bar) < 1e-6) {
        const auto d = profile_g_derivatives(eq.r_bar, p);
        return -d.d3 / (3.0 * d.d2 * d.d2);
    }
    const double g = profile_g(r, p, eq);
    const auto d = profile_g_derivatives(r, p);
    return (d.d1 * d.d1 - 2.0 * d.d2 * g) / (d.d1 * d.d1 * d.d1);
}

struct ScaledValue {
    double value;
    double scale;
};

ScaledValue c1_scaled(double x) {
    const double e2 = std::exp(2.0 * x), e4 = e2 * e2, e6 = e4 * e2;
    const double t1 = e6 * (4 * x * x * x - x * x + 3 * x - 3);
    const double t2 = e4 * (-4 * x * x * x + x * x + 3 * x + 3);
    return {t1 + t2, std::abs(t1) + std::abs(t2)};
}

ScaledValue c2_scaled(double x) {
    const double e2 = std::exp(2.0 * x), e4 = e2 * e2, e6 = e4 * e2;
    const double t1 = e6 * (5 * x * x + x);
    const double t2 = e4 * (-12 * x * x + 6 * x - 12);
    const double t3 = e2 * (15 * x * x + 17 * x + 12);
    return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

ScaledValue c3_scaled(double x) {
    const double e2 = std::exp(2.0 * x), e4 = e2 * e2, e6 = e4 * e2;
    const double t1 = e6 * (2 * x + 2);
    const double t2 = e4 * (-8 * x - 10);
    const double t3 = e2 * (30 * x + 2);
    return {t1 + t2 + t3 + 6.0, std::abs(t1) + std::abs(t2) + std::abs(t3) + 6.0};
}

ScaledValue c0_scaled(double x) {
    const double e6 = std::exp(6.0 * x);
    const double t = e6 * x * x * x * x;
    return {t, std::abs(t)};
}

ScaledValue f1_scaled(double x) {
    const double ex = std::exp(x);
    const double t1 = ex * (2 * x * x * x - x * x + 6 * x - 12);
    const double t2 = -2 * x * x * x + x * x + 6 * x + 12;
    return {t1 + t2, std::abs(t1) + std::abs(t2)};
}

ScaledValue f2_scaled(double x) {
    const double ex = std::exp(x), e2 = ex * ex;
    const double t1 = e2 * (5 * x * x + 2 * x);
    const double t2 = -12.0 * ex * (x * x - x + 4);
    const double t3 = 15 * x * x + 34 * x + 48;
    return {t1 + t2 + t3, std::abs(t1) + std::abs(t2) + std::abs(t3)};
}

ScaledValue f3_scaled(double x) {
    const double ex = std::exp(x), e2 = ex * ex, e3 = e2 * ex;
    const double t1 = e3 * (x + 2);
    const double t2 = e2 * (-4 * x - 10);
    const double t3 = ex * (15 * x + 2);
    return {t1 + t2 + t3 + 6.0, std::abs(t1) + std::abs(t2) + std::abs(t3) + 6.0};
}

ScaledValue g2_scaled(double x) {
    const double ex = std::exp(x);
    const double t1 = ex * (10 * x * x + 34 * x + 21);
    const double t2 = -3 * x * x - 15 * x - 21;
    return {t1 + t2, std::abs(t1) + std::abs(t2)};
}

ScaledValue g3d_scaled(double x) {
    const double ex = std::exp(x), e2 = ex * ex;
    const double t1 = e2 * (6 * x + 17);
    const double t2 = ex * (-8 * x - 32);
    return {t1 + t2 + 15.0, std::abs(t1) + std::abs(t2) + 15.0};
}

/// min of value/scale over the x grid
SignReport grid_min_report(const std::string& claim, const std::string& grid, double tol,
                           const std::vector<double>& xs,
                           ScaledValue (*eval)(double)) {
    SignReport rep;
    rep.claim = claim;
    rep.grid = grid;
    rep.min_value = 1e300;
    for (double x : xs) {
        const auto [v, s] = eval(x);
        const double scaled = v / std::max(s, 1e-300);
        if (scaled < rep.min_value) {
            rep.min_value = scaled;
            rep.witness = {x, 0.0};
        }
    }
    rep.pass = rep.min_value >= -tol;
    return rep;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
}

}  // namespace

double s_function(double r, const PhysParams& params) {
    if (!(r > 0.0)) throw std::invalid_argument("s_function: r must be > 0");
    return s_value(r, params, equilibrium(params));
}

double s_prime_numerator(double r, const PhysParams& params) {
    const auto eq = equilibrium(params);
    const double g = profile_g(r, params, eq);
    const auto d = profile_g_derivatives(r, params);
    return -2.0 * d.d3 * g * d.d1 - 3.0 * d.d2 * d.d1 * d.d1 + 6.0 * d.d2 * d.d2 * g;
}

CubicCoeffs cubic_coefficients(double x) {
    if (std::abs(x) > 100.0)
        throw std::invalid_argument("cubic_coefficients: |x| > 100 would overflow");
    return CubicCoeffs{c0_scaled(x).value, c1_scaled(x).value, c2_scaled(x).value,
                          c3_scaled(x).value};
}

CubicCoeffs cubic_coefficient_scales(double x) {
    if (std::abs(x) > 100.0)
        throw std::invalid_argument("cubic_coefficient_scales: |x| > 100 would overflow");
    return CubicCoeffs{c0_scaled(x).scale, c1_scaled(x).scale, c2_scaled(x).scale,
                          c3_scaled(x).scale};
}

double master_polynomial(double x, double a) {
    const double e2 = std::exp(2.0 * x);
    const double tg = a + e2 * (-a + 2 * a * x + x * x);
    const double ta = -a + e2 * (x + a);
    const double tb = 3 * a + e2 * (1 - a - x);
    const double tc = -12 * a + e2 * (-3 + 2 * a + 2 * x);
    return 3 * tg * tb * tb - tg * ta * tc - 3 * ta * ta * tb;
}

double chain_f1(double x) { return f1_scaled(x).value; }
double chain_f2(double x) { return f2_scaled(x).value; }
double chain_f3(double x) { return f3_scaled(x).value; }
double chain_g2(double x) { return g2_scaled(x).value; }

double chain_g3(double x) {
    const double ex = std::exp(x), e2 = ex * ex;
    return e2 * (3 * x + 7) + ex * (-8 * x - 24) + 15 * x + 17;
}

double chain_g3_deriv(double x) { return g3d_scaled(x).value; }

double chain_h3(double x) {
    const double ex = std::exp(x);
    return ex * (3 * x + 10) - 2 * x - 10;
}

double chain_h3_deriv(double x) {
    const double ex = std::exp(x);
    return ex * (3 * x + 13) - 2.0;
}

std::vector<SignReport> run_sign_checks(double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("run_sign_checks: tol must be > 0");

    const auto xs = linspace(-20.0, 20.0, 4001);
    const std::string xgrid = "x in [-20, 20], 4001 points";
    std::vector<SignReport> reports;

    reports.push_back(grid_min_report("C1 >= 0", xgrid, tol, xs, c1_scaled));
    reports.push_back(grid_min_report("C2 >= 0", xgrid, tol, xs, c2_scaled));
    reports.push_back(grid_min_report("C3 >= 0", xgrid, tol, xs, c3_scaled));

    {
        SignReport rep;
        rep.claim = "P(x,a) >= 0";
        rep.grid = xgrid + "; a in (0, 50], 500 points";
        rep.min_value = 1e300;
        for (double x : xs) {
            const auto s0 = c0_scaled(x);
            const auto s1 = c1_scaled(x);
            const auto s2 = c2_scaled(x);
            const auto s3 = c3_scaled(x);
            for (int i = 1; i <= 500; ++i) {
                const double a = 50.0 * i / 500.0;
                const double p = ((s3.value * a + s2.value) * a + s1.value) * a + s0.value;
                const double scale = ((s3.scale * a + s2.scale) * a + s1.scale) * a + s0.scale;
                const double scaled = p / std::max(scale, 1e-300);
                if (scaled < rep.min_value) {
                    rep.min_value = scaled;
                    rep.witness = {x, a};
                }
            }
        }
        rep.pass = rep.min_value >= -tol;
        reports.push_back(std::move(rep));
    }

    reports.push_back(grid_min_report("f1 >= 0", xgrid, tol, xs, f1_scaled));
    reports.push_back(grid_min_report("f2 >= 0", xgrid, tol, xs, f2_scaled));
    reports.push_back(grid_min_report("f3 >= 0", xgrid, tol, xs, f3_scaled));

    {
        // g2 changes sign only at 0: sign(x) * g2(x) stays nonnegative
        SignReport rep;
        rep.claim = "g2 sign change only at 0";
        rep.grid = xgrid;
        rep.min_value = 1e300;
        for (double x : xs) {
            const auto [v, s] = g2_scaled(x);
            const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            const double scaled = sgn * v / std::max(s, 1e-300);
            if (scaled < rep.min_value) {
                rep.min_value = scaled;
                rep.witness = {x, 0.0};
            }
        }
        rep.pass = rep.min_value >= -tol;
        reports.push_back(std::move(rep));
    }

    {
        // h3 falls then rises: its derivative changes sign exactly once
        SignReport rep;
        rep.claim = "h3 decreasing-then-increasing";
        rep.grid = xgrid;
        int transitions = 0;
        double first_change = 0.0;
        bool first_negative = false;
        double prev = chain_h3_deriv(xs.front());
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double cur = chain_h3_deriv(xs[i]);
            if ((prev < 0.0) != (cur < 0.0)) {
                if (transitions == 0) {
                    first_change = xs[i];
                    first_negative = prev < 0.0;
                }
                ++transitions;
            }
            prev = cur;
        }
        rep.min_value = -static_cast<double>(transitions - 1);
        rep.witness = {first_change, 0.0};
        rep.pass = transitions == 1 && first_negative;
        reports.push_back(std::move(rep));
    }

    reports.push_back(grid_min_report("g3' >= 0", xgrid, tol, xs, g3d_scaled));

    const PhysParams sets[3] = {
        PhysParams(1.0, 0.0, two_pi, two_pi, 1.0, 1.0),
        PhysParams(1.0, 0.0, two_pi, two_pi, std::exp(1.0), 0.0),
        PhysParams(2.0, 0.0, two_pi, two_pi, 1.0, 0.0),
    };
    const char* names[3] = {"(I0=1, L=1, pz=1)", "(I0=1, L=e, pz=0)", "(I0=2, L=1, pz=0)"};
    for (int j = 0; j < 3; ++j) {
        SignReport rep;
        rep.claim = std::string("s(r) nondecreasing for ") + names[j];
        rep.grid = "r log grid [0.05, 20], 2000 points";
        rep.min_value = 1e300;
        const auto eq = equilibrium(sets[j]);
        const double lr0 = std::log(0.05), lr1 = std::log(20.0);
        double prev_s = s_value(0.05, sets[j], eq);
        for (int i = 1; i < 2000; ++i) {
            const double r = std::exp(lr0 + (lr1 - lr0) * i / 1999.0);
            const double cur_s = s_value(r, sets[j], eq);
            const double scale = std::max({1.0, std::abs(prev_s), std::abs(cur_s)});
            const double scaled = (cur_s - prev_s) / scale;
            if (scaled < rep.min_value) {
                rep.min_value = scaled;
                rep.witness = {r, 0.0};
            }
            prev_s = cur_s;
        }
        rep.pass = rep.min_value >= -tol;
        reports.push_back(std::move(rep));
    }

    return reports;
}

}  // namespace wireorbit
