#pragma once
#include "wireorbit/params.hpp"

#include <array>
#include <string>
#include <vector>

namespace wireorbit {

/**
 * Result of one numerical sign/structure check. min_value is the smallest
 * scaled value observed on the grid (for shape claims, minus the number of
 * excess sign transitions); pass means min_value >= -tolerance.
 */
struct SignReport {
    std::string claim;
    std::string grid;
    double min_value = 0.0;
    bool pass = false;
    std::array<double, 2> witness{0.0, 0.0};  ///< argmin location (x|r, a or 0)
};

/**
 * Monotone indicator s(r) = (g'^2 - 2 g'' g)/g'^3 with the removable
 * singularity at the equilibrium patched by its limit -g'''/(3 g''^2)
 * for |r - r_bar| < 1e-6.
 */
double s_function(double r, const PhysParams& params);

/// Numerator of s'(r): -2 g''' g g' - 3 g'' g'^2 + 6 g''^2 g.
double s_prime_numerator(double r, const PhysParams& params);

/// Coefficients of the master cubic P(x,a) = C3 a^3 + C2 a^2 + C1 a + C0.
struct CubicCoeffs {
    double C0, C1, C2, C3;
};

/// Verbatim evaluation of the four coefficient displays. |x| > 100 rejected.
CubicCoeffs cubic_coefficients(double x);

/// Sum of the absolute exponential terms of each coefficient: the natural
/// magnitude for relative sign tolerances.
CubicCoeffs cubic_coefficient_scales(double x);

/// The three-product form of P(x,a) before collection in powers of a.
double master_polynomial(double x, double a);

// Auxiliary inequality chains behind C1, C2, C3.
double chain_f1(double x);
double chain_f2(double x);
double chain_f3(double x);
double chain_g2(double x);
double chain_g3(double x);
double chain_g3_deriv(double x);
double chain_h3(double x);
double chain_h3_deriv(double x);

/**
 * Runs the full battery of sign checks on dense grids (x in [-20, 20] with
 * 4001 points, a in (0, 50] with 500 points): C1, C2, C3 >= 0, P(x,a) >= 0,
 * f1, f2, f3 >= 0, the sign structure of g2 and h3 (with g3' >= 0), and the
 * monotonicity of s(r) for three parameter sets. Tolerances are relative to
 * the local magnitude of the exponential terms.
 */
std::vector<SignReport> run_sign_checks(double tol = 1e-9);

}  // namespace wireorbit
