#pragma once
#include <numbers>

namespace wireorbit {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/**
 * Physical constants and conserved momenta of the wire model.
 *
 * The wire carries a current I0 + k*I1(t) with I1 a zero-mean T1-periodic
 * modulation. L and pz are the conserved angular and linear momenta of the
 * particle; mu0 defaults to 2*pi so that the coupling mu0*I0/(2*pi) equals I0.
 */
struct PhysParams {
    double I0 = 1.0;          ///< base current, > 0
    double k = 0.0;           ///< modulation amplitude, >= 0
    double T1 = two_pi;       ///< driving period, > 0
    double omega1 = 1.0;      ///< 2*pi/T1, kept consistent by construction
    double mu0 = two_pi;      ///< vacuum permeability (unit light speed)
    double L = 1.0;           ///< angular momentum, > 0
    double pz = 0.0;          ///< linear momentum

    PhysParams() = default;
    PhysParams(double I0_, double k_, double T1_, double mu0_, double L_, double pz_);

    /// Coupling constant c = mu0*I0/(2*pi).
    double coupling() const { return mu0 * I0 / two_pi; }

    /// Throws std::invalid_argument on any violated constraint.
    void validate() const;
};

/**
 * Constants of the scaled radial profile 1 + c^2*ln(x)^2 + K/x^2 obtained
 * from the substitution x = exp(pz/c)*r. x0 is the abscissa of its minimum
 * (the equilibrium radius in scaled coordinates) and log_x0 = ln(x0) > 0.
 */
struct DerivedParams {
    double c;              ///< mu0*I0/(2*pi)
    double c_sq;           ///< c^2, weight of the squared-log term
    double inv_sq_weight;  ///< L^2*exp(2*pz/c), weight of the 1/x^2 term
    double x0;             ///< unique root > 1 of inv_sq_weight = c_sq*x^2*ln(x)
    double log_x0;         ///< ln(x0)
};

/// Solves the scaled-profile constants from the physical parameters.
DerivedParams derived_constants(const PhysParams& params);

/// Reduced phase point of the planar radial system.
struct RadialState {
    double r = 1.0;   ///< radial coordinate, > 0
    double pr = 0.0;  ///< radial momentum
};

}  // namespace wireorbit
