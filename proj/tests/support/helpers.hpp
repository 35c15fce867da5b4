#pragma once
#include "wireorbit/field.hpp"
#include "wireorbit/model.hpp"
#include "wireorbit/params.hpp"

#include <array>
#include <cmath>
#include <random>

namespace testsupport {

using namespace wireorbit;

/// mu0 = 2*pi, I0 = 1, L = 1, pz = 1: the hand-checkable parameter set with
/// equilibrium at r = 1, H0 = sqrt(3) and linearized period 2*pi.
inline PhysParams canonical(double k = 0.0, double T1 = two_pi) {
    return PhysParams(1.0, k, T1, two_pi, 1.0, 1.0);
}

inline PhysParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> i0(0.3, 3.0);
    std::uniform_real_distribution<double> ell(0.3, 3.0);
    std::uniform_real_distribution<double> pzd(-1.5, 1.5);
    return PhysParams(i0(rng), 0.0, two_pi, two_pi, ell(rng), pzd(rng));
}

inline RadialState random_state(std::mt19937& rng, double r_lo = 0.3, double r_hi = 4.0) {
    std::uniform_real_distribution<double> rd(r_lo, r_hi);
    std::uniform_real_distribution<double> pd(-1.5, 1.5);
    return RadialState{rd(rng), pd(rng)};
}

/**
 * Fixed-step implicit midpoint rule, used only as a symmetric cross-check
 * oracle against the adaptive integrator.
 */
inline RadialState midpoint_flow(RadialState y, double t0, double t1, int steps,
                                 const PhysParams& params, const FieldModel& field) {
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        RadialState stage = y;
        for (int it = 0; it < 50; ++it) {
            const RadialState mid{0.5 * (y.r + stage.r), 0.5 * (y.pr + stage.pr)};
            const auto d = vector_field(t + 0.5 * h, mid, params, field);
            const RadialState next{y.r + h * d.dr_dt, y.pr + h * d.dpr_dt};
            const double delta = std::hypot(next.r - stage.r, next.pr - stage.pr);
            stage = next;
            if (delta < 1e-15) break;
        }
        y = stage;
        t += h;
    }
    return y;
}

/// Plain bisection, used as the independent root oracle in examples.
template <typename F>
double bisect(F&& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0.0) == (flo > 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace testsupport
