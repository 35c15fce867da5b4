#pragma once
#include "wireorbit/field.hpp"
#include "wireorbit/params.hpp"

#include <span>
#include <vector>

namespace wireorbit {

/// Unique center of the unperturbed radial system.
struct Equilibrium {
    double r_bar;      ///< equilibrium radius, pz + c ln(r) = (L^2/c) r^-2
    double H0;         ///< minimum Hamiltonian energy
    double omega_lin;  ///< linearized angular frequency at the center
    double T0_lin;     ///< 2*pi/omega_lin (operational minimal period)
    double T0_alt;  ///< the alternative closed-form minimal period, kept
                       ///< for comparison; the numerics side with T0_lin
};

/// Unperturbed Hamiltonian sqrt(1 + (pz + c ln r)^2 + pr^2 + L^2 r^-2). >= 1.
double hamiltonian(const RadialState& state, const PhysParams& params);

/// Full Hamiltonian including the time-dependent potential of `field` at
/// modulation amplitude params.k.
double hamiltonian(double t, const RadialState& state, const PhysParams& params,
                   const FieldModel& field);

struct Derivatives {
    double dr_dt;
    double dpr_dt;
};

/// Right-hand side of the reduced system with the full potential (no
/// truncation in k).
Derivatives vector_field(double t, const RadialState& state, const PhysParams& params,
                         const FieldModel& field);

struct PerturbationCoeffs {
    double dF1_dk;
    double dF2_dk;
};

/// First-order coefficients dF/dk at k = 0 of the regular expansion in the
/// modulation amplitude.
PerturbationCoeffs perturbation_coefficients(double t, const RadialState& state,
                                             const PhysParams& params,
                                             const FieldModel& field);

/// Pure-profile factors G1, G2 of the sine channel: under the harmonic
/// ansatz a = D(r) sin(w1 t), dF/dk = G * sin(w1 t).
PerturbationCoeffs perturbation_profile_factors(const RadialState& state,
                                                const PhysParams& params,
                                                const FieldModel& field);

/// Solves the unique equilibrium and both minimal-period formulas.
Equilibrium equilibrium(const PhysParams& params);

/// One reconstructed point of the full cylindrical motion.
struct FullMotionSample {
    double t;
    double r, theta, z;
    double r_dot, theta_dot, z_dot;
    double speed;   ///< |velocity| < 1
    double energy;  ///< instantaneous Hamiltonian = Lorentz factor
};

/**
 * Rebuilds theta(t), z(t) and the velocities from a reduced time series.
 * theta and z start at 0 and are accumulated by trapezoidal quadrature;
 * the velocities are pointwise functions of the state.
 */
std::vector<FullMotionSample> reconstruct_full_motion(std::span<const double> times,
                                                      std::span<const RadialState> states,
                                                      const PhysParams& params,
                                                      const FieldModel& field);

}  // namespace wireorbit
