#pragma once
#include <filesystem>
#include <vector>

namespace wireorbit {

/**
 * One period of the current modulation I1(t).
 *
 * Either the built-in unit sine or a sampled waveform on a uniform grid,
 * interpolated by a periodic cubic spline. Sampled waveforms are shifted to
 * zero mean by subtracting the sample mean (which also zeroes the exact
 * integral of the spline over one period); the applied shift is recorded.
 */
class Waveform {
  public:
    /// I1(t) = sin(2*pi*t/period).
    static Waveform sine(double period);

    /// I1 identically zero.
    static Waveform zero(double period);

    /// Uniform samples at t_i = i*period/N, i = 0..N-1 (endpoint excluded).
    static Waveform sampled(std::vector<double> values, double period,
                            bool enforce_zero_mean = true);

    /// CSV with header "t,I1": one period, uniform grid starting at t = 0.
    static Waveform from_csv(const std::filesystem::path& path);

    double period() const { return period_; }
    double value(double t) const;
    double deriv(double t) const;

    /// Mean subtracted at construction (0 for the built-in kinds).
    double mean_adjustment() const { return mean_adjustment_; }

    /// Max |I1| over the stored samples (1 for the sine kind).
    double amplitude() const { return amplitude_; }

    bool has_zero_mean() const { return zero_mean_; }

  private:
    enum class Kind { sine, zero, sampled };

    Waveform(Kind kind, double period) : kind_(kind), period_(period) {}

    Kind kind_;
    double period_;
    double mean_adjustment_ = 0.0;
    double amplitude_ = 1.0;
    bool zero_mean_ = true;

    // sampled kind: values and spline second derivatives on the uniform grid
    std::vector<double> y_;
    std::vector<double> m_;
    double h_ = 0.0;
};

}  // namespace wireorbit
