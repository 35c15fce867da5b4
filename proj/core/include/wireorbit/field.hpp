#pragma once
#include "wireorbit/params.hpp"
#include "wireorbit/waveform.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace wireorbit {

/**
 * Radial profile with derivative. Closed forms carry analytic derivatives;
 * sample tables use monotone-preserving (Fritsch-Carlson) cubic interpolation.
 */
class RadialProfile {
  public:
    RadialProfile() = default;  // identically zero

    static RadialProfile analytic(std::function<double(double)> value,
                                  std::function<double(double)> deriv);
    static RadialProfile constant(double value);
    static RadialProfile sampled(std::vector<double> r, std::vector<double> v);

    double value(double r) const;
    double deriv(double r) const;
    bool is_zero() const { return kind_ == Kind::zero; }

  private:
    enum class Kind { zero, analytic, constant, table };
    Kind kind_ = Kind::zero;
    double const_value_ = 0.0;
    std::function<double(double)> fn_, dfn_;
    std::vector<double> xs_, ys_, slopes_;
    std::size_t locate(double r) const;
};

enum class FieldKind { constant, harmonic, tabulated };

/**
 * Time-dependent part a(t,r) of the vector potential, in one of three forms:
 * constant current (a = 0), harmonic ansatz a = D(r) sin(w1 t) + E(r) cos(w1 t),
 * or the delayed potential of a tabulated waveform.
 */
class FieldModel {
  public:
    static FieldModel constant_current();
    static FieldModel harmonic(RadialProfile sine_profile,
                               RadialProfile cosine_profile = {});
    /// Harmonic ansatz with the physically derived profiles of I1 = sin:
    /// D = -(pi/2) Y0(omega1 r), and optionally E = -(pi/2) J0(omega1 r).
    static FieldModel bessel_harmonic(double omega1, bool with_cosine = false);
    static FieldModel tabulated(Waveform waveform);

    FieldKind kind() const { return kind_; }

    double modulation(double t, double r, const PhysParams& params) const;     ///< a(t,r)
    double modulation_dr(double t, double r, const PhysParams& params) const;  ///< da/dr
    /// Both a(t,r) and da/dr in one evaluation (one quadrature pass for the
    /// tabulated kind).
    std::pair<double, double> modulation_with_dr(double t, double r,
                                                 const PhysParams& params) const;

    const RadialProfile& sine_profile() const { return sine_; }
    const RadialProfile& cosine_profile() const { return cosine_; }
    bool has_cosine() const { return !cosine_.is_zero(); }
    const std::optional<Waveform>& waveform() const { return waveform_; }

  private:
    explicit FieldModel(FieldKind kind) : kind_(kind) {}
    FieldKind kind_;
    RadialProfile sine_, cosine_;
    std::optional<Waveform> waveform_;
};

}  // namespace wireorbit
