#include "wireorbit/cylinder.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wireorbit {
namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double series_cutoff = 12.0;

// Ascending series around x = 0.
//   J0 = sum (-q)^m / (m!)^2,            q = x^2/4
//   J1 = (x/2) sum (-q)^m / (m!(m+1)!)
//   Y0 = (2/pi)[(ln(x/2)+gamma) J0 + sum (-1)^{m+1} H_m q^m/(m!)^2]
//   Y1 = (2/pi)(ln(x/2)+gamma) J1 - 2/(pi x)
//        - (x/(2 pi)) sum (-1)^m (H_m + H_{m+1}) q^m/(m!(m+1)!)
struct SeriesResult {
    double j, y;
};

SeriesResult series_order0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;     // q^m/(m!)^2
    double j = 1.0;
    double s = 0.0;        // sum (-1)^{m+1} H_m q^m/(m!)^2
    double harmonic = 0.0;
    double sign = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        sign = -sign;
        j += sign * term;
        s += -sign * harmonic * term;
        if (term < 1e-18 * (std::abs(j) + 1.0)) break;
    }
    const double y = (2.0 / std::numbers::pi) * ((std::log(0.5 * x) + euler_gamma) * j + s);
    return {j, y};
}

SeriesResult series_order1(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;     // q^m/(m!(m+1)!)
    double j_sum = 1.0;
    double s = (0.0 + 1.0);  // (H_0 + H_1) * term at m = 0
    double h_m = 0.0, h_m1 = 1.0;
    double sign = 1.0;
    for (int m = 1; m <= 60; ++m) {
        term *= q / (static_cast<double>(m) * (m + 1));
        h_m += 1.0 / m;
        h_m1 += 1.0 / (m + 1);
        sign = -sign;
        j_sum += sign * term;
        s += sign * (h_m + h_m1) * term;
        if (term < 1e-18 * (std::abs(j_sum) + 1.0)) break;
    }
    const double j = 0.5 * x * j_sum;
    const double y = (2.0 / std::numbers::pi) * (std::log(0.5 * x) + euler_gamma) * j
                     - 2.0 / (std::numbers::pi * x)
                     - x / (2.0 * std::numbers::pi) * s;
    return {j, y};
}

// Hankel expansion: J = A(cos chi * P - sin chi * Q), Y = A(sin chi * P + cos chi * Q)
// with A = sqrt(2/(pi x)), chi = x - (2 nu + 1) pi/4 and the usual P/Q series
// in 1/(8x). Terms are added until they stop decreasing.
SeriesResult asymptotic(double x, int nu) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double a = 1.0;  // running product term a_m = prod (mu-(2j-1)^2) / (m! 8^m)
    double prev = 1e300;
    for (int m = 1; m <= 30; ++m) {
        a *= (mu - (2.0 * m - 1.0) * (2.0 * m - 1.0)) / (8.0 * m);
        const double t = a / std::pow(x, m);
        if (std::abs(t) >= prev) break;
        prev = std::abs(t);
        const int phase = ((m % 4) + 4) % 4;  // i^m pattern: sign and P/Q slot
        switch (phase) {
            case 0: p += t; break;
            case 1: q += t; break;
            case 2: p -= t; break;
            case 3: q -= t; break;
        }
        if (std::abs(t) < 1e-18) break;
    }
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    const double chi = x - (2.0 * nu + 1.0) * std::numbers::pi / 4.0;
    const double c = std::cos(chi), s = std::sin(chi);
    return {amp * (c * p - s * q), amp * (s * p + c * q)};
}

}  // namespace

double cyl_j0(double x) {
    x = std::abs(x);
    return x <= series_cutoff ? series_order0(x).j : asymptotic(x, 0).j;
}

double cyl_y0(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("cyl_y0: requires x > 0");
    return x <= series_cutoff ? series_order0(x).y : asymptotic(x, 0).y;
}

double cyl_j1(double x) {
    const double ax = std::abs(x);
    const double v = ax <= series_cutoff ? series_order1(ax).j : asymptotic(ax, 1).j;
    return x < 0.0 ? -v : v;
}

double cyl_y1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("cyl_y1: requires x > 0");
    return x <= series_cutoff ? series_order1(x).y : asymptotic(x, 1).y;
}

}  // namespace wireorbit
