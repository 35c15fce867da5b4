#pragma once
#include "wireorbit/field.hpp"
#include "wireorbit/integrate.hpp"
#include "wireorbit/params.hpp"

#include <vector>

namespace wireorbit {

/**
 * Subharmonic Melnikov data for resonance order n: the Fourier pair of the
 * t0-sinusoid, its amplitude/phase, and the zero set.
 *
 * M_n(t0) = (n T1/2) * (-a sin(w1 t0) + b cos(w1 t0))
 *         = amplitude * sin(w1 t0 + phase).
 * When the cosine profile E(r) is active its quadrature is folded into the
 * same effective (a, b) pair by linearity.
 */
struct MelnikovResult {
    int n;
    double H_n;           ///< resonant energy, T(H_n) = n*T1
    double a;             ///< effective cosine Fourier coefficient
    double b;             ///< effective sine Fourier coefficient
    double amplitude;     ///< (n T1/2) sqrt(a^2 + b^2)
    double phase;         ///< phi with sin(phi) = b/|..|, cos(phi) = -a/|..|
    std::vector<double> zeros;  ///< t0 zeros in [0, n T1), 2n of them when simple
    bool simple;          ///< amplitude above the relative threshold
};

struct MelnikovOptions {
    int base_samples = 4096;     ///< per n*T1; doubled until refine_tol is met
    double refine_tol = 1e-9;
    double integrate_tol = 1e-12;
    double invert_tol = 1e-11;
    bool start_inner = false;    ///< sample the orbit from (r_a, 0) instead of (r_b, 0)
    double simple_threshold = 1e-10;  ///< relative to the integrand L2 scale
};

/// Closed unperturbed orbit with period n*T1, sampled from a turning point.
/// Requires n*T1 > T0_lin.
OrbitSample resonant_orbit(int n, const PhysParams& params,
                           const MelnikovOptions& options = {});

/// Closed-form wedge F1*G2 - F2*G1 of the sine channel at one state.
double wedge_integrand(const RadialState& state, const PhysParams& params,
                       const FieldModel& field);

/// Melnikov integral at one phase t0, by spectral quadrature along the
/// resonant orbit.
double melnikov_value(int n, double t0, const PhysParams& params, const FieldModel& field,
                      const MelnikovOptions& options = {});

/// Fourier form of M_n: coefficients, amplitude, phase, zero set, simplicity.
MelnikovResult melnikov_fourier(int n, const PhysParams& params, const FieldModel& field,
                                const MelnikovOptions& options = {});

}  // namespace wireorbit
