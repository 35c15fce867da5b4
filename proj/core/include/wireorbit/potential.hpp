#pragma once
#include "wireorbit/params.hpp"
#include "wireorbit/waveform.hpp"

namespace wireorbit {

/// One evaluation of the delayed potential and its radial derivative.
struct PotentialSample {
    double t;
    double r;
    double value;      ///< a(t, r)
    double dvalue_dr;  ///< d a / d r at (t, r)
};

/// Static part of the vector potential: a0(r) = I0 * ln(r).
double log_potential(double r, const PhysParams& params);

struct TailAverageOptions {
    int window = 8;        ///< partial sums entering the averaging step
    double tol = 1e-9;     ///< convergence of successive averaged values
    int max_blocks = 512;  ///< period blocks before giving up
};

/**
 * Delayed potential of a zero-mean periodic current.
 *
 * Evaluates a(t,r) = int_r^inf I1(t-u)/sqrt(u^2-r^2) du. The endpoint
 * square-root singularity is removed by the substitution u = r*cosh(s); the
 * conditionally convergent oscillatory tail is summed in blocks of one
 * period and the partial-sum sequence averaged (polynomial extrapolation in
 * the reciprocal block endpoint over the trailing window).
 *
 * Throws std::invalid_argument for r <= 0 or a waveform without zero mean,
 * std::runtime_error when the averaging does not settle (the message carries
 * the spread of the last partial sums).
 */
PotentialSample delayed_potential(double t, double r, const Waveform& waveform,
                                  const TailAverageOptions& options = {});

/// Sine/cosine radial profiles of the delayed potential of I1 = sin(omega*t).
struct HarmonicProfiles {
    double sine;    ///< D(r) = -(pi/2) * Y0(omega*r)
    double cosine;  ///< E(r) = -(pi/2) * J0(omega*r)
};

/// Closed-form profiles via the module's own cylinder functions.
HarmonicProfiles harmonic_profiles(double omega, double r);

}  // namespace wireorbit
