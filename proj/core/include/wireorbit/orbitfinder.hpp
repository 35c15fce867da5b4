#pragma once
#include "wireorbit/field.hpp"
#include "wireorbit/melnikov.hpp"
#include "wireorbit/params.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace wireorbit {

enum class OrbitKind { elliptic, hyperbolic, parabolic };

/// A located periodic orbit of the perturbed stroboscopic map.
struct OrbitRecord {
    int n = 0;                       ///< period multiple of T1
    RadialState fixed_point;         ///< on the section t = 0
    double residual = 0.0;           ///< |P^n(x) - x| at convergence
    std::array<std::complex<double>, 2> floquet;  ///< monodromy eigenvalues
    OrbitKind kind = OrbitKind::parabolic;
    double distance_to_unperturbed = 0.0;  ///< sup distance to Gamma_n
    double k = 0.0;                  ///< modulation amplitude used
    int newton_iterations = 0;
    int minimal_multiple = 0;        ///< minimal radial period = this * T1
    bool lower_period = false;       ///< converged to an orbit of smaller multiple
};

struct FinderOptions {
    double newton_tol = 1e-10;   ///< residual target for the fixed point
    int max_newton = 50;
    double fd_step = 1e-6;       ///< central-difference step, scaled by state norm
    double integrate_tol = 1e-12;
    double k_max = 1e-2;         ///< perturbative-regime guard
    double dedup_tol = 1e-6;     ///< phase-orbit equivalence tolerance
    MelnikovOptions melnikov;    ///< used by scan_orbits for seeding
};

/// Time n*T1 flow map of the perturbed system at section phase t = 0.
RadialState stroboscopic_map(const RadialState& state, const PhysParams& params,
                             const FieldModel& field, int n = 1, double tol = 1e-12);

/**
 * Newton iteration on stroboscopic_map(., n) - id from `seed`, with
 * finite-difference Jacobian. k = 0 is rejected (the unperturbed fixed
 * points are non-isolated). Non-convergence raises std::runtime_error;
 * convergence onto a lower-multiple orbit is flagged, not an error.
 */
OrbitRecord find_orbit(int n, const PhysParams& params, const FieldModel& field,
                       const RadialState& seed, const FinderOptions& options = {});

/// One resonance order of the catalogue.
struct ResonanceScan {
    int n = 0;
    double H_n = 0.0;
    int melnikov_zero_count = 0;
    std::vector<OrbitRecord> orbits;  ///< distinct orbits after deduplication
    int failed_seeds = 0;
};

/**
 * For each n <= n_max with n*T1 > T0, seeds Newton runs on Gamma_n at the
 * Melnikov zero phases, deduplicates by the time-T1 map, and catalogues the
 * distinct periodic orbits. Orders with resonant energy outside
 * `energy_range` (when given) are skipped.
 */
std::vector<ResonanceScan> scan_orbits(int n_max, const PhysParams& params,
                                       const FieldModel& field,
                                       std::optional<std::pair<double, double>> energy_range = {},
                                       const FinderOptions& options = {});

}  // namespace wireorbit
