#pragma once
#include "wireorbit/model.hpp"
#include "wireorbit/params.hpp"

#include <vector>

namespace wireorbit {

/// Turning-point profile f(r) = 1 + (pz + c ln r)^2 + L^2 r^-2 = H^2 at pr = 0.
double profile_f(double r, const PhysParams& params);

/// Companion well function g(r) = (f(r) - H0^2)/2 evaluated without
/// cancellation near the equilibrium.
double profile_g(double r, const PhysParams& params, const Equilibrium& eq);

/// Analytic derivatives of g (equal to half the f derivatives).
struct GDerivatives {
    double d1, d2, d3;
};
GDerivatives profile_g_derivatives(double r, const PhysParams& params);

/// Intersections of a closed orbit with the r-axis, 0 < r_a < r_bar < r_b.
struct TurningPoints {
    double r_a;
    double r_b;
    double H;
};

/// Both roots of f(r) = H^2, bracketed on either side of the equilibrium and
/// polished to 1e-12 relative. Requires H > H0.
TurningPoints turning_points(double H, const PhysParams& params);

/**
 * Period T(H) = 2 int H/sqrt(H^2 - f(r)) dr between the turning points.
 * The integrable endpoint singularities are removed by the substitution
 * y^2 = (f - H0^2)/(H^2 - H0^2) and the result evaluated on Gauss-Chebyshev
 * nodes, doubling the node count until two refinements agree to quad_tol
 * relatively.
 */
double period(double H, const PhysParams& params, double quad_tol = 1e-11);

/// Minimal period: the linearized value (operational) and the alternative
/// closed form, reported side by side.
struct MinPeriod {
    double T0_lin;
    double T0_alt;
};
MinPeriod min_period(const PhysParams& params);

/// Unique H with period(H) = T, via bracket growth plus bisection-safeguarded
/// secant on the strictly monotone map. Requires T > T0_lin.
double invert_period(double T, const PhysParams& params, double rel_tol = 1e-11);

struct PeriodMapEntry {
    double H, T, r_a, r_b;
};

/// Monotone energy-period table on a geometric grid in H - H0.
struct PeriodMapTable {
    std::vector<PeriodMapEntry> entries;
    double H0 = 0.0;
    double T0 = 0.0;  ///< operational minimal period (linearized)
};

/**
 * Tabulates (H, T, r_a, r_b) on a grid geometric in H - H0 starting at
 * H0 + first_offset. Strict monotonicity of T is asserted entrywise; a
 * violation aborts with the offending pair in the message.
 */
PeriodMapTable build_table(const PhysParams& params, double H_max, int n_points,
                           double first_offset = 1e-4);

}  // namespace wireorbit
