#include "wireorbit/field.hpp"
#include "wireorbit/cylinder.hpp"
#include "wireorbit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wireorbit {

RadialProfile RadialProfile::analytic(std::function<double(double)> value,
                                      std::function<double(double)> deriv) {
    RadialProfile p;
    p.kind_ = Kind::analytic;
    p.fn_ = std::move(value);
    p.dfn_ = std::move(deriv);
    return p;
}

RadialProfile RadialProfile::constant(double value) {
    RadialProfile p;
    p.kind_ = value == 0.0 ? Kind::zero : Kind::constant;
    p.const_value_ = value;
    return p;
}

RadialProfile RadialProfile::sampled(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 3)
        throw std::invalid_argument("RadialProfile::sampled: need >= 3 matching samples");
    if (!std::is_sorted(r.begin(), r.end()))
        throw std::invalid_argument("RadialProfile::sampled: radii must be increasing");

    RadialProfile p;
    p.kind_ = Kind::table;
    const std::size_t n = r.size();

    // Fritsch-Carlson monotone cubic slopes
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
    std::vector<double> s(n);
    s[0] = d[0];
    s[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i)
        s[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) { s[i] = s[i + 1] = 0.0; continue; }
        const double a = s[i] / d[i], b = s[i + 1] / d[i];
        const double norm = a * a + b * b;
        if (norm > 9.0) {
            const double tau = 3.0 / std::sqrt(norm);
            s[i] = tau * a * d[i];
            s[i + 1] = tau * b * d[i];
        }
    }
    p.xs_ = std::move(r);
    p.ys_ = std::move(v);
    p.slopes_ = std::move(s);
    return p;
}

std::size_t RadialProfile::locate(double r) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), r);
    if (it == xs_.begin()) return 0;
    const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    return std::min(i, xs_.size() - 2);
}

double RadialProfile::value(double r) const {
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::constant: return const_value_;
        case Kind::analytic: return fn_(r);
        case Kind::table: break;
    }
    const std::size_t i = locate(r);
    const double h = xs_[i + 1] - xs_[i];
    const double u = (r - xs_[i]) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

double RadialProfile::deriv(double r) const {
    switch (kind_) {
        case Kind::zero:
        case Kind::constant: return 0.0;
        case Kind::analytic: return dfn_(r);
        case Kind::table: break;
    }
    const std::size_t i = locate(r);
    const double h = xs_[i + 1] - xs_[i];
    const double u = (r - xs_[i]) / h;
    const double dh00 = 6 * u * (u - 1) / h;
    const double dh10 = (1 - u) * (1 - 3 * u);
    const double dh01 = -6 * u * (u - 1) / h;
    const double dh11 = u * (3 * u - 2);
    return dh00 * ys_[i] + dh10 * slopes_[i] + dh01 * ys_[i + 1] + dh11 * slopes_[i + 1];
}

FieldModel FieldModel::constant_current() { return FieldModel(FieldKind::constant); }

FieldModel FieldModel::harmonic(RadialProfile sine_profile, RadialProfile cosine_profile) {
    FieldModel f(FieldKind::harmonic);
    f.sine_ = std::move(sine_profile);
    f.cosine_ = std::move(cosine_profile);
    return f;
}

FieldModel FieldModel::bessel_harmonic(double omega1, bool with_cosine) {
    if (!(omega1 > 0.0))
        throw std::invalid_argument("FieldModel::bessel_harmonic: omega1 must be > 0");
    const double half_pi = 0.5 * std::numbers::pi;
    auto sine = RadialProfile::analytic(
        [omega1, half_pi](double r) { return -half_pi * cyl_y0(omega1 * r); },
        [omega1, half_pi](double r) { return half_pi * omega1 * cyl_y1(omega1 * r); });
    RadialProfile cosine;
    if (with_cosine)
        cosine = RadialProfile::analytic(
            [omega1, half_pi](double r) { return -half_pi * cyl_j0(omega1 * r); },
            [omega1, half_pi](double r) { return half_pi * omega1 * cyl_j1(omega1 * r); });
    return harmonic(std::move(sine), std::move(cosine));
}

FieldModel FieldModel::tabulated(Waveform waveform) {
    FieldModel f(FieldKind::tabulated);
    f.waveform_ = std::move(waveform);
    return f;
}

double FieldModel::modulation(double t, double r, const PhysParams& params) const {
    switch (kind_) {
        case FieldKind::constant: return 0.0;
        case FieldKind::harmonic: {
            const double ph = params.omega1 * t;
            double a = sine_.value(r) * std::sin(ph);
            if (!cosine_.is_zero()) a += cosine_.value(r) * std::cos(ph);
            return a;
        }
        case FieldKind::tabulated:
            return delayed_potential(t, r, *waveform_).value;
    }
    return 0.0;
}

std::pair<double, double> FieldModel::modulation_with_dr(double t, double r,
                                                         const PhysParams& params) const {
    if (kind_ == FieldKind::tabulated) {
        const auto s = delayed_potential(t, r, *waveform_);
        return {s.value, s.dvalue_dr};
    }
    return {modulation(t, r, params), modulation_dr(t, r, params)};
}

double FieldModel::modulation_dr(double t, double r, const PhysParams& params) const {
    switch (kind_) {
        case FieldKind::constant: return 0.0;
        case FieldKind::harmonic: {
            const double ph = params.omega1 * t;
            double da = sine_.deriv(r) * std::sin(ph);
            if (!cosine_.is_zero()) da += cosine_.deriv(r) * std::cos(ph);
            return da;
        }
        case FieldKind::tabulated:
            return delayed_potential(t, r, *waveform_).dvalue_dr;
    }
    return 0.0;
}

}  // namespace wireorbit
