#include "wireorbit/model.hpp"
#include "wireorbit/rootfind.hpp"

#include <cmath>
#include <stdexcept>

namespace wireorbit {
namespace {

void check_radius(double r, const char* who) {
    if (!(r > 0.0)) throw std::invalid_argument(std::string(who) + ": r must be > 0");
}

}  // namespace

double hamiltonian(const RadialState& state, const PhysParams& params) {
    check_radius(state.r, "hamiltonian");
    const double c = params.coupling();
    const double w = params.pz + c * std::log(state.r);
    const double lr = params.L / state.r;
    return std::sqrt(1.0 + w * w + state.pr * state.pr + lr * lr);
}

double hamiltonian(double t, const RadialState& state, const PhysParams& params,
                   const FieldModel& field) {
    check_radius(state.r, "hamiltonian");
    const double m = params.mu0 / two_pi;
    // A = -m (I0 ln r + k a), so pz - A = pz + m I0 ln r + m k a
    const double w = params.pz + m * params.I0 * std::log(state.r) +
                     m * params.k * field.modulation(t, state.r, params);
    const double lr = params.L / state.r;
    return std::sqrt(1.0 + w * w + state.pr * state.pr + lr * lr);
}

Derivatives vector_field(double t, const RadialState& state, const PhysParams& params,
                         const FieldModel& field) {
    check_radius(state.r, "vector_field");
    const double m = params.mu0 / two_pi;
    const double r = state.r;

    double a = 0.0, da = 0.0;
    if (params.k != 0.0) {
        std::tie(a, da) = field.modulation_with_dr(t, r, params);
    }
    const double w = params.pz + m * (params.I0 * std::log(r) + params.k * a);
    const double dA_dr = -m * (params.I0 / r + params.k * da);
    const double lr = params.L / r;
    const double q = 1.0 + w * w + state.pr * state.pr + lr * lr;
    if (!std::isfinite(q)) throw std::runtime_error("vector_field: non-finite field evaluation");
    const double inv_h = 1.0 / std::sqrt(q);

    const double num_pr = params.L * params.L / (r * r * r) + w * dA_dr;
    return Derivatives{state.pr * inv_h, num_pr * inv_h};
}

PerturbationCoeffs perturbation_coefficients(double t, const RadialState& state,
                                             const PhysParams& params,
                                             const FieldModel& field) {
    check_radius(state.r, "perturbation_coefficients");
    const double m = params.mu0 / two_pi;
    const double r = state.r;
    const auto [a, da] = field.modulation_with_dr(t, r, params);

    const double w = params.pz + m * params.I0 * std::log(r);
    const double lr = params.L / r;
    const double q = 1.0 + w * w + state.pr * state.pr + lr * lr;
    const double q12 = std::sqrt(q);
    const double q32 = q * q12;

    const double dF1 = -m * state.pr * w * a / q32;
    const double unperturbed_num = params.L * params.L / (r * r * r) - m * params.I0 * w / r;
    const double dF2 = -(m * m * params.I0 * a / r + m * w * da) / q12
                       - unperturbed_num * m * w * a / q32;
    return PerturbationCoeffs{dF1, dF2};
}

PerturbationCoeffs perturbation_profile_factors(const RadialState& state,
                                                const PhysParams& params,
                                                const FieldModel& field) {
    check_radius(state.r, "perturbation_profile_factors");
    if (field.kind() != FieldKind::harmonic)
        throw std::invalid_argument(
            "perturbation_profile_factors: requires the harmonic ansatz");
    const double m = params.mu0 / two_pi;
    const double r = state.r;
    const double D = field.sine_profile().value(r);
    const double dD = field.sine_profile().deriv(r);

    const double w = params.pz + m * params.I0 * std::log(r);
    const double lr = params.L / r;
    const double q = 1.0 + w * w + state.pr * state.pr + lr * lr;
    const double q12 = std::sqrt(q);
    const double q32 = q * q12;

    const double g1 = -m * state.pr * w * D / q32;
    const double unperturbed_num = params.L * params.L / (r * r * r) - m * params.I0 * w / r;
    const double g2 = -(m * m * params.I0 * D / r + m * w * dD) / q12
                      - unperturbed_num * m * w * D / q32;
    return PerturbationCoeffs{g1, g2};
}

Equilibrium equilibrium(const PhysParams& params) {
    params.validate();
    const double c = params.coupling();
    const double lsq = params.L * params.L;

    // pz + c ln r - (L^2/c) r^-2: increasing, -inf at 0+, +inf at infinity
    auto fn = [&](double r) { return params.pz + c * std::log(r) - lsq / (c * r * r); };
    auto dfn = [&](double r) { return c / r + 2.0 * lsq / (c * r * r * r); };

    double lo = 1.0, hi = 1.0;
    const double f1 = fn(1.0);
    if (f1 > 0.0)      std::tie(lo, hi) = rootfind::grow_bracket(fn, 1.0, -1);
    else if (f1 < 0.0) std::tie(lo, hi) = rootfind::grow_bracket(fn, 1.0, +1);
    const double r_bar = lo == hi ? lo : rootfind::newton_bisect(fn, dfn, lo, hi, 1e-15);

    const double h0 = hamiltonian(RadialState{r_bar, 0.0}, params);
    const double r2 = r_bar * r_bar;
    const double curvature = c * c / r2 + 2.0 * lsq / (r2 * r2);  // f''(r_bar)/2
    const double omega_lin = std::sqrt(curvature) / h0;

    // The alternative closed form, evaluated exactly as displayed. Via the
    // equilibrium identity its radicand denominator equals the same
    // curvature, so the two values differ by the constant factor sqrt(2).
    const double w_bar = params.pz + c * std::log(r_bar);
    const double denom = (c - w_bar) * c / r2 + 3.0 * lsq / (r2 * r2);
    const double t0_alt = std::sqrt(2.0 * std::numbers::pi * std::numbers::pi * h0 * h0 / denom);

    return Equilibrium{r_bar, h0, omega_lin, two_pi / omega_lin, t0_alt};
}

std::vector<FullMotionSample> reconstruct_full_motion(std::span<const double> times,
                                                      std::span<const RadialState> states,
                                                      const PhysParams& params,
                                                      const FieldModel& field) {
    if (times.size() != states.size() || times.empty())
        throw std::invalid_argument("reconstruct_full_motion: mismatched or empty series");

    const double m = params.mu0 / two_pi;
    std::vector<FullMotionSample> out;
    out.reserve(times.size());

    double theta = 0.0, z = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double r = states[i].r;
        check_radius(r, "reconstruct_full_motion");

        const double a = params.k != 0.0 ? field.modulation(t, r, params) : 0.0;
        const double pz_minus_A = params.pz + m * (params.I0 * std::log(r) + params.k * a);
        const double lr = params.L / r;
        const double h = std::sqrt(1.0 + pz_minus_A * pz_minus_A +
                                   states[i].pr * states[i].pr + lr * lr);

        const double r_dot = states[i].pr / h;
        const double theta_dot = params.L / (r * r * h);
        const double z_dot = pz_minus_A / h;
        const double speed2 = r_dot * r_dot + r * r * theta_dot * theta_dot + z_dot * z_dot;
        if (!(speed2 < 1.0))
            throw std::runtime_error("reconstruct_full_motion: speed >= 1, inconsistent series");

        if (i > 0) {
            const double dt = t - times[i - 1];
            theta += 0.5 * dt * (out.back().theta_dot + theta_dot);
            z += 0.5 * dt * (out.back().z_dot + z_dot);
        }
        out.push_back(FullMotionSample{t, r, theta, z, r_dot, theta_dot, z_dot,
                                       std::sqrt(speed2), h});
    }
    return out;
}

}  // namespace wireorbit
