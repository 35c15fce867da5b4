#include "wireorbit/potential.hpp"
#include "wireorbit/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wireorbit {
namespace {

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirrored).
constexpr int gl_half = 16;
constexpr double gl_x[gl_half] = {
    0.0483076656877383162348126, 0.1444719615827964934851864, 0.2392873622521370745446032,
    0.3318686022821276497799168, 0.4213512761306353453641194, 0.5068999089322293900237475,
    0.5877157572407623290407455, 0.6630442669302152009751152, 0.7321821187402896803874267,
    0.7944837959679424069630973, 0.8493676137325699701336930, 0.8963211557660521239653072,
    0.9349060759377396891709191, 0.9647622555875064307738119, 0.9856115115452683354001750,
    0.9972638618494815635449811};
constexpr double gl_w[gl_half] = {
    0.0965400885147278005667648, 0.0956387200792748594190820, 0.0938443990808045656391802,
    0.0911738786957638847128686, 0.0876520930044038111427715, 0.0833119242269467552221991,
    0.0781938957870703064717409, 0.0723457941088485062253994, 0.0658222227763618468376501,
    0.0586840934785355471452836, 0.0509980592623761761961632, 0.0428358980222266806568786,
    0.0342738629130214331026877, 0.0253920653092620594557526, 0.0162743947309056706051706,
    0.0070186100094700966004071};

double gauss32(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < gl_half; ++i)
        s += gl_w[i] * (f(mid + hw * gl_x[i]) + f(mid - hw * gl_x[i]));
    return hw * s;
}

double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double tol, int depth = 0) {
    const double whole = gauss32(f, a, b);
    const double mid = 0.5 * (a + b);
    const double split = gauss32(f, a, mid) + gauss32(f, mid, b);
    if (std::abs(split - whole) <= tol * std::max(1.0, std::abs(split)) || depth > 30)
        return split;
    return adaptive_gauss(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gauss(f, mid, b, 0.5 * tol, depth + 1);
}

/**
 * Integrates F(u)/sqrt(u^2 - r^2) over (r, inf) for F built from a zero-mean
 * T-periodic waveform (so the tail converges conditionally). Head via the
 * cosh substitution, tail via period blocks plus averaging.
 */
double singular_oscillatory_integral(const std::function<double(double)>& F,
                                     double r, double period,
                                     const TailAverageOptions& opt) {
    // cosh head up to u0 = max(2r, 0.75*period): removes the singularity and
    // keeps the first tail block clear of it.
    const double u0 = std::max(2.0 * r, 0.75 * period);
    const double s_end = std::acosh(u0 / r);
    const double head =
        adaptive_gauss([&](double s) { return F(r * std::cosh(s)); }, 0.0, s_end, 1e-13);

    const int m = std::max(3, opt.window);
    std::vector<double> partial;    // partial sums at block boundaries
    std::vector<double> recip;      // 1/u at those boundaries
    partial.reserve(opt.max_blocks);
    recip.reserve(opt.max_blocks);

    auto tail_fn = [&](double u) { return F(u) / std::sqrt((u - r) * (u + r)); };

    double running = 0.0;
    double prev_avg = 0.0;
    bool have_prev = false;
    double best_diff = 1e300, best_avg = 0.0;
    double block_scale = 0.0;
    int stale = 0;
    std::vector<double> neville(m);
    for (int j = 0; j < opt.max_blocks; ++j) {
        const double a = u0 + j * period;
        const double b = a + period;
        const double block = gauss32(tail_fn, a, b);
        block_scale = std::max(block_scale, std::abs(block));
        running += block;
        partial.push_back(running);
        recip.push_back(1.0 / b);

        if (static_cast<int>(partial.size()) < m) continue;

        // extrapolate the trailing window to 1/u -> 0 (Neville scheme); the
        // result is a weighted average of the last m partial sums
        const std::size_t base = partial.size() - m;
        for (int i = 0; i < m; ++i) neville[i] = partial[base + i];
        for (int lev = 1; lev < m; ++lev) {
            for (int i = 0; i < m - lev; ++i) {
                const double xi = recip[base + i];
                const double xl = recip[base + i + lev];
                neville[i] = (xi * neville[i + 1] - xl * neville[i]) / (xi - xl);
            }
        }
        const double avg = neville[0];
        if (have_prev) {
            const double diff = std::abs(avg - prev_avg);
            // homogeneous in the waveform amplitude, so scaling the input
            // scales the whole computation including the stopping decision
            const double scale = std::abs(head + avg) + block_scale;
            if (diff <= opt.tol * scale) return head + avg;
            if (diff < best_diff) {
                best_diff = diff;
                best_avg = avg;
                stale = 0;
            } else if (++stale > 40) {
                break;  // extrapolation noise floor reached; stop feeding it
            }
        }
        prev_avg = avg;
        have_prev = true;
    }

    // accept a plateau just above the requested tolerance (roundoff floor of
    // the window extrapolation), reject anything worse
    if (best_diff <= 20.0 * opt.tol * (std::abs(head + best_avg) + block_scale))
        return head + best_avg;

    const std::size_t nlast = std::min<std::size_t>(m, partial.size());
    const auto [lo, hi] = std::minmax_element(partial.end() - nlast, partial.end());
    std::ostringstream msg;
    msg << "delayed_potential: tail averaging did not converge after "
        << partial.size() << " blocks; last partial-sum spread = " << (*hi - *lo);
    throw std::runtime_error(msg.str());
}

}  // namespace

double log_potential(double r, const PhysParams& params) {
    if (!(r > 0.0)) throw std::invalid_argument("log_potential: r must be > 0");
    return params.I0 * std::log(r);
}

PotentialSample delayed_potential(double t, double r, const Waveform& waveform,
                                  const TailAverageOptions& options) {
    if (!(r > 0.0)) throw std::invalid_argument("delayed_potential: r must be > 0");
    if (!waveform.has_zero_mean())
        throw std::invalid_argument("delayed_potential: waveform must have zero mean");

    const double period = waveform.period();
    const double value = singular_oscillatory_integral(
        [&](double u) { return waveform.value(t - u); }, r, period, options);

    // d/dr of the tau-form integral, converted to the u variable:
    //   da/dr = -r * int_r^inf [I1'(t-u)/u + I1(t-u)/u^2] / sqrt(u^2-r^2) du
    const double dvalue = singular_oscillatory_integral(
        [&](double u) {
            return -r * (waveform.deriv(t - u) / u + waveform.value(t - u) / (u * u));
        },
        r, period, options);

    return PotentialSample{t, r, value, dvalue};
}

HarmonicProfiles harmonic_profiles(double omega, double r) {
    if (!(omega > 0.0) || !(r > 0.0))
        throw std::invalid_argument("harmonic_profiles: omega and r must be > 0");
    const double x = omega * r;
    const double half_pi = 0.5 * std::numbers::pi;
    return HarmonicProfiles{-half_pi * cyl_y0(x), -half_pi * cyl_j0(x)};
}

}  // namespace wireorbit
