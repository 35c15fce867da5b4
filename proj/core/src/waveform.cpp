#include "wireorbit/waveform.hpp"
#include "wireorbit/params.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wireorbit {
namespace {

// Cyclic tridiagonal solve for the periodic natural spline: diagonal 4,
// off-diagonals 1 (both corners 1). Sherman-Morrison on top of Thomas.
std::vector<double> solve_cyclic_spline(const std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    const double diag = 4.0, off = 1.0;

    auto thomas = [&](const std::vector<double>& b, const std::vector<double>& d) {
        std::vector<double> c(n), x(n);
        c[0] = off / b[0];
        x[0] = d[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = b[i] - off * c[i - 1];
            c[i] = off / m;
            x[i] = (d[i] - off * x[i - 1]) / m;
        }
        for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
        return x;
    };

    const double gamma = -diag;
    std::vector<double> b(n, diag);
    b[0] = diag - gamma;
    b[n - 1] = diag - off * off / gamma;

    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = off;

    const auto x = thomas(b, rhs);
    const auto z = thomas(b, u);
    const double fact = (x[0] + off * x[n - 1] / gamma) /
                        (1.0 + z[0] + off * z[n - 1] / gamma);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - fact * z[i];
    return out;
}

}  // namespace

Waveform Waveform::sine(double period) {
    if (!(period > 0.0)) throw std::invalid_argument("Waveform::sine: period must be > 0");
    return Waveform(Kind::sine, period);
}

Waveform Waveform::zero(double period) {
    if (!(period > 0.0)) throw std::invalid_argument("Waveform::zero: period must be > 0");
    Waveform w(Kind::zero, period);
    w.amplitude_ = 0.0;
    return w;
}

Waveform Waveform::sampled(std::vector<double> values, double period, bool enforce_zero_mean) {
    if (!(period > 0.0)) throw std::invalid_argument("Waveform::sampled: period must be > 0");
    if (values.size() < 4)
        throw std::invalid_argument("Waveform::sampled: need at least 4 samples");

    Waveform w(Kind::sampled, period);
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    if (enforce_zero_mean) {
        for (double& v : values) v -= mean;
        w.mean_adjustment_ = mean;
    } else {
        w.zero_mean_ = std::abs(mean) <= 1e-14;
    }

    const std::size_t n = values.size();
    w.h_ = period / static_cast<double>(n);
    w.amplitude_ = 0.0;
    for (double v : values) w.amplitude_ = std::max(w.amplitude_, std::abs(v));

    std::vector<double> rhs(n);
    const double scale = 6.0 / (w.h_ * w.h_);
    for (std::size_t i = 0; i < n; ++i) {
        const double ym = values[(i + n - 1) % n];
        const double yp = values[(i + 1) % n];
        rhs[i] = scale * (ym - 2.0 * values[i] + yp);
    }
    w.m_ = solve_cyclic_spline(rhs);
    w.y_ = std::move(values);
    return w;
}

Waveform Waveform::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Waveform::from_csv: cannot open " + path.string());

    std::vector<double> ts, ys;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double t, v;
        if (!(row >> t >> v)) {
            if (first) { first = false; continue; }  // header row
            throw std::runtime_error("Waveform::from_csv: malformed row '" + line + "'");
        }
        first = false;
        ts.push_back(t);
        ys.push_back(v);
    }
    if (ts.size() < 4)
        throw std::runtime_error("Waveform::from_csv: need at least 4 samples");

    const double h = ts[1] - ts[0];
    if (!(h > 0.0)) throw std::runtime_error("Waveform::from_csv: time column not increasing");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (std::abs(ts[i] - ts[0] - static_cast<double>(i) * h) > 1e-9 * h * ts.size())
            throw std::runtime_error("Waveform::from_csv: grid not uniform");
    }
    if (std::abs(ts[0]) > 1e-9 * h)
        throw std::runtime_error("Waveform::from_csv: grid must start at t = 0");

    const double period = h * static_cast<double>(ts.size());
    return sampled(std::move(ys), period);
}

double Waveform::value(double t) const {
    switch (kind_) {
        case Kind::sine: return std::sin(two_pi * t / period_);
        case Kind::zero: return 0.0;
        case Kind::sampled: break;
    }
    const std::size_t n = y_.size();
    double s = std::fmod(t, period_);
    if (s < 0.0) s += period_;
    std::size_t i = std::min(static_cast<std::size_t>(s / h_), n - 1);
    const double a = s - static_cast<double>(i) * h_;   // offset in [0, h]
    const double b = h_ - a;
    const std::size_t j = (i + 1) % n;
    return (m_[i] * b * b * b + m_[j] * a * a * a) / (6.0 * h_) +
           (y_[i] / h_ - m_[i] * h_ / 6.0) * b +
           (y_[j] / h_ - m_[j] * h_ / 6.0) * a;
}

double Waveform::deriv(double t) const {
    switch (kind_) {
        case Kind::sine: {
            const double w = two_pi / period_;
            return w * std::cos(w * t);
        }
        case Kind::zero: return 0.0;
        case Kind::sampled: break;
    }
    const std::size_t n = y_.size();
    double s = std::fmod(t, period_);
    if (s < 0.0) s += period_;
    std::size_t i = std::min(static_cast<std::size_t>(s / h_), n - 1);
    const double a = s - static_cast<double>(i) * h_;
    const double b = h_ - a;
    const std::size_t j = (i + 1) % n;
    return (-m_[i] * b * b + m_[j] * a * a) / (2.0 * h_) +
           (y_[j] - y_[i]) / h_ - (m_[j] - m_[i]) * h_ / 6.0;
}

}  // namespace wireorbit
