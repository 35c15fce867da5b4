#include "wireorbit/melnikov.hpp"
#include "wireorbit/periodmap.hpp"

#include <cmath>
#include <stdexcept>

namespace wireorbit {
namespace {

struct ResonantDense {
    double H_n;
    double period;
    DenseSolution dense;
};

ResonantDense resonant_dense(int n, const PhysParams& params, const MelnikovOptions& opt) {
    if (n < 1) throw std::invalid_argument("melnikov: resonance order must be >= 1");
    const auto eq = equilibrium(params);
    const double target = n * params.T1;
    if (!(target > eq.T0_lin))
        throw std::invalid_argument(
            "melnikov: n*T1 <= T0, no resonant orbit of that order");

    const double H_n = invert_period(target, params, opt.invert_tol);
    const auto tp = turning_points(H_n, params);
    const RadialState start{opt.start_inner ? tp.r_a : tp.r_b, 0.0};
    auto field = FieldModel::constant_current();
    return ResonantDense{H_n, target,
                         integrate_dense(start, 0.0, target, params, field, opt.integrate_tol)};
}

double wedge_with(const RadialProfile& profile, const RadialState& state,
                  const PhysParams& params) {
    const double m = params.mu0 / two_pi;
    const double r = state.r;
    const double w = params.pz + m * params.I0 * std::log(r);
    const double lr = params.L / r;
    const double h_sq = 1.0 + w * w + state.pr * state.pr + lr * lr;
    return -(m * m * params.I0 * profile.value(r) / r + m * w * profile.deriv(r)) *
           state.pr / h_sq;
}

void require_harmonic(const FieldModel& field, const char* who) {
    if (field.kind() == FieldKind::tabulated)
        throw std::invalid_argument(std::string(who) +
                                    ": requires the harmonic ansatz (sine/cosine profiles)");
}

struct FourierPair {
    double a = 0.0, b = 0.0;        // sine-channel wedge
    double a_cos = 0.0, b_cos = 0.0;  // cosine-channel wedge
    double rms = 0.0;
};

FourierPair fourier_at_resolution(const ResonantDense& orbit, int samples,
                                  const PhysParams& params, const FieldModel& field) {
    const double period = orbit.period;
    const double dt = period / samples;
    const bool with_cos = field.has_cosine();

    FourierPair out;
    double sq = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double t = j * dt;
        const RadialState s = orbit.dense.state(t);
        const double w_sin = wedge_with(field.sine_profile(), s, params);
        const double c = std::cos(params.omega1 * t);
        const double sn = std::sin(params.omega1 * t);
        out.a += w_sin * c;
        out.b += w_sin * sn;
        sq += w_sin * w_sin;
        if (with_cos) {
            const double w_cos = wedge_with(field.cosine_profile(), s, params);
            out.a_cos += w_cos * c;
            out.b_cos += w_cos * sn;
            sq += w_cos * w_cos;
        }
    }
    const double norm = 2.0 / samples;
    out.a *= norm;
    out.b *= norm;
    out.a_cos *= norm;
    out.b_cos *= norm;
    out.rms = std::sqrt(sq / samples);
    return out;
}

}  // namespace

OrbitSample resonant_orbit(int n, const PhysParams& params, const MelnikovOptions& options) {
    const auto rd = resonant_dense(n, params, options);
    OrbitSample out;
    out.energy = rd.H_n;
    out.period = rd.period;
    out.times.reserve(options.base_samples);
    out.states.reserve(options.base_samples);
    for (int j = 0; j < options.base_samples; ++j) {
        const double t = rd.period * j / options.base_samples;
        out.times.push_back(t);
        out.states.push_back(rd.dense.state(t));
    }
    return out;
}

double wedge_integrand(const RadialState& state, const PhysParams& params,
                       const FieldModel& field) {
    if (!(state.r > 0.0)) throw std::invalid_argument("wedge_integrand: r must be > 0");
    require_harmonic(field, "wedge_integrand");
    return wedge_with(field.sine_profile(), state, params);
}

double melnikov_value(int n, double t0, const PhysParams& params, const FieldModel& field,
                      const MelnikovOptions& options) {
    require_harmonic(field, "melnikov_value");
    const auto rd = resonant_dense(n, params, options);
    const double period = rd.period;
    const bool with_cos = field.has_cosine();

    auto value_at = [&](int samples) {
        const double dt = period / samples;
        double acc = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double t = j * dt;
            const RadialState s = rd.dense.state(t);
            acc += wedge_with(field.sine_profile(), s, params) *
                   std::sin(params.omega1 * (t - t0));
            if (with_cos)
                acc += wedge_with(field.cosine_profile(), s, params) *
                       std::cos(params.omega1 * (t - t0));
        }
        return acc * dt;
    };

    double prev = value_at(options.base_samples);
    for (int s = 2 * options.base_samples; s <= 64 * options.base_samples; s *= 2) {
        const double cur = value_at(s);
        if (std::abs(cur - prev) <= options.refine_tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

MelnikovResult melnikov_fourier(int n, const PhysParams& params, const FieldModel& field,
                                const MelnikovOptions& options) {
    require_harmonic(field, "melnikov_fourier");
    const auto rd = resonant_dense(n, params, options);
    const double period = rd.period;

    FourierPair fp = fourier_at_resolution(rd, options.base_samples, params, field);
    for (int s = 2 * options.base_samples; s <= 64 * options.base_samples; s *= 2) {
        const FourierPair next = fourier_at_resolution(rd, s, params, field);
        const double scale = std::max({std::hypot(next.a, next.b),
                                       std::hypot(next.a_cos, next.b_cos), next.rms, 1e-300});
        const double delta = std::max({std::abs(next.a - fp.a), std::abs(next.b - fp.b),
                                       std::abs(next.a_cos - fp.a_cos),
                                       std::abs(next.b_cos - fp.b_cos)});
        fp = next;
        if (delta <= options.refine_tol * scale) break;
    }

    // effective pair of the t0-sinusoid; the cosine channel enters by linearity
    const double a_eff = fp.a - fp.b_cos;
    const double b_eff = fp.b + fp.a_cos;

    MelnikovResult res;
    res.n = n;
    res.H_n = rd.H_n;
    res.a = a_eff;
    res.b = b_eff;
    const double mod = std::hypot(a_eff, b_eff);
    res.amplitude = 0.5 * period * mod;
    res.phase = mod > 0.0 ? std::atan2(b_eff, -a_eff) : 0.0;

    const double l2_scale = 0.5 * period * fp.rms;
    res.simple = res.amplitude > options.simple_threshold * l2_scale;

    if (res.simple) {
        // zeros of sin(w1 t0 + phase) in [0, n T1): t0 = (k pi - phase)/w1
        const double pi = std::numbers::pi;
        const int k0 = static_cast<int>(std::ceil(res.phase / pi - 1e-12));
        for (int k = k0;; ++k) {
            const double t0 = (k * pi - res.phase) / params.omega1;
            if (t0 >= period - 1e-12 * period) break;
            res.zeros.push_back(t0 < 0.0 ? 0.0 : t0);
        }
    }
    return res;
}

}  // namespace wireorbit
