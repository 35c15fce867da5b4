#include "support/helpers.hpp"
#include "wireorbit/cylinder.hpp"
#include "wireorbit/potential.hpp"
#include "wireorbit/waveform.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace wireorbit;

namespace {

double closed_form(double t, double r, double omega) {
    return -0.5 * M_PI *
           (cyl_y0(omega * r) * std::sin(omega * t) + cyl_j0(omega * r) * std::cos(omega * t));
}

}  // namespace

TEST_CASE("log potential") {
    const auto p = testsupport::canonical();
    CHECK(log_potential(1.0, p) == doctest::Approx(0.0).epsilon(1e-16));
    PhysParams p2(2.0, 0.0, two_pi, two_pi, 1.0, 0.0);
    CHECK(log_potential(std::exp(1.0), p2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(log_potential(0.0, p), std::invalid_argument);

    // derivative I0/r against central differences
    for (double r : {0.3, 1.0, 4.2}) {
        const double h = 1e-6 * r;
        const double fd = (log_potential(r + h, p) - log_potential(r - h, p)) / (2.0 * h);
        CHECK(std::abs(fd - p.I0 / r) <= 1e-9);
    }
}

TEST_CASE("delayed potential of the zero waveform vanishes") {
    const auto w = Waveform::zero(two_pi);
    for (double r : {0.5, 1.0, 5.0})
        for (double t : {0.0, 1.0, 3.3}) {
            const auto s = delayed_potential(t, r, w);
            CHECK(std::abs(s.value) < 1e-14);
            CHECK(std::abs(s.dvalue_dr) < 1e-14);
        }
}

TEST_CASE("delayed potential of a unit sine matches the cylinder closed form") {
    const auto w = Waveform::sine(two_pi);  // omega = 1
    const auto spot = delayed_potential(0.0, 1.0, w);
    CHECK(spot.value == doctest::Approx(-0.5 * M_PI * cyl_j0(1.0)).epsilon(1e-7));
    CHECK(spot.value == doctest::Approx(-1.2019697153172066).epsilon(1e-6));

    double worst = 0.0;
    for (double r = 0.5; r <= 10.0; r += 0.5) {
        for (double t : {0.0, 1.1, 2.9, 5.0}) {
            const auto s = delayed_potential(t, r, w);
            const double exact = closed_form(t, r, 1.0);
            worst = std::max(worst, std::abs(s.value - exact) /
                                        std::max(1.0, std::abs(exact)));
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("delayed potential is periodic in t") {
    const auto w = Waveform::sine(two_pi);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rd(0.4, 6.0), td(0.0, two_pi);
    for (int i = 0; i < 10; ++i) {
        const double r = rd(rng), t = td(rng);
        const auto a0 = delayed_potential(t, r, w);
        const auto a1 = delayed_potential(t + two_pi, r, w);
        CHECK(std::abs(a0.value - a1.value) <= 1e-8);
    }
}

TEST_CASE("radial derivative of the delayed potential matches finite differences") {
    const auto w = Waveform::sine(two_pi);
    for (double r : {0.7, 1.4, 3.1}) {
        for (double t : {0.4, 2.0}) {
            const double h = 1e-5;
            const auto sp = delayed_potential(t, r + h, w);
            const auto sm = delayed_potential(t, r - h, w);
            const auto s = delayed_potential(t, r, w);
            CHECK(std::abs((sp.value - sm.value) / (2.0 * h) - s.dvalue_dr) <= 1e-6);
        }
    }
}

TEST_CASE("zero-mean waveform gives zero-mean potential in t") {
    // a two-harmonic sampled waveform
    const int n = 256;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) {
        const double t = two_pi * i / n;
        samples[i] = std::sin(t) + 0.4 * std::cos(2.0 * t) + 0.1;  // mean removed on build
    }
    const auto w = Waveform::sampled(samples, two_pi);
    CHECK(std::abs(w.mean_adjustment() - 0.1) < 1e-12);

    for (double r : {0.8, 2.5}) {
        const int nt = 64;
        double mean = 0.0;
        for (int i = 0; i < nt; ++i)
            mean += delayed_potential(two_pi * i / nt, r, w).value;
        mean /= nt;
        CHECK(std::abs(mean) <= 1e-8);
    }
}

TEST_CASE("delayed potential is linear in the waveform") {
    const int n = 128;
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) base[i] = std::sin(two_pi * i / n) + 0.3 * std::sin(4.0 * M_PI * i / n);
    const double alpha = 3.7;
    std::vector<double> scaled = base;
    for (double& v : scaled) v *= alpha;

    const auto w1 = Waveform::sampled(base, two_pi);
    const auto w2 = Waveform::sampled(scaled, two_pi);
    for (double r : {0.6, 1.9}) {
        const auto a1 = delayed_potential(1.3, r, w1);
        const auto a2 = delayed_potential(1.3, r, w2);
        CHECK(std::abs(a2.value - alpha * a1.value) <= 1e-10 * std::abs(a2.value));
    }
}

TEST_CASE("non-zero-mean waveform is rejected") {
    std::vector<double> biased(16, 1.0);
    for (int i = 0; i < 16; ++i) biased[i] = 1.0 + std::sin(two_pi * i / 16);
    const auto w = Waveform::sampled(biased, two_pi, /*enforce_zero_mean=*/false);
    CHECK_FALSE(w.has_zero_mean());
    CHECK_THROWS_AS(delayed_potential(0.0, 1.0, w), std::invalid_argument);
}

TEST_CASE("harmonic profiles agree with the quadrature on the acceptance grid") {
    const auto w = Waveform::sine(two_pi);
    double worst = 0.0;
    for (double x = 0.5; x <= 10.0; x += 0.25) {
        const auto prof = harmonic_profiles(1.0, x);
        // sine profile from a(t, r) at w1 t = pi/2, cosine profile at t = 0
        const double d_quad = delayed_potential(0.25 * two_pi, x, w).value;
        const double e_quad = delayed_potential(0.0, x, w).value;
        worst = std::max(worst, std::abs(prof.sine - d_quad));
        worst = std::max(worst, std::abs(prof.cosine - e_quad));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("first zero of the cosine profile located on the quadrature oracle") {
    const auto w = Waveform::sine(two_pi);
    const double root = testsupport::bisect(
        [&](double r) { return delayed_potential(0.0, r, w).value; }, 2.0, 3.0, 60);
    CHECK(root == doctest::Approx(2.404825557695773).epsilon(1e-7));
    CHECK(std::abs(harmonic_profiles(1.0, root).cosine) <= 1e-6);
}

TEST_CASE("profiles decay within the asymptotic envelope") {
    for (double x = 10.0; x <= 200.0; x *= 1.37) {
        const auto prof = harmonic_profiles(1.0, x);
        CHECK(std::abs(prof.sine) <= 2.0 / std::sqrt(x));
        CHECK(std::abs(prof.cosine) <= 2.0 / std::sqrt(x));
    }
}

TEST_CASE("waveform CSV round trip and zero-mean enforcement") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "wireorbit_test_csv";
    fs::create_directories(dir);
    const auto path = dir / "waveform.csv";
    {
        std::ofstream out(path);
        out.precision(17);
        out << "t,I1\n";
        const int n = 64;
        for (int i = 0; i < n; ++i) {
            const double t = 7.0 * i / n;
            out << t << "," << (std::sin(two_pi * t / 7.0) + 0.25) << "\n";
        }
    }
    const auto w = Waveform::from_csv(path);
    CHECK(w.period() == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(w.mean_adjustment() == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(w.value(1.0) == doctest::Approx(std::sin(two_pi / 7.0)).epsilon(1e-6));
    // spline derivative tracks the analytic one
    CHECK(w.deriv(2.0) ==
          doctest::Approx(two_pi / 7.0 * std::cos(two_pi * 2.0 / 7.0)).epsilon(1e-4));
    fs::remove_all(dir);
}

TEST_CASE("waveform CSV rejects a non-uniform grid") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "wireorbit_test_csv2";
    fs::create_directories(dir);
    const auto path = dir / "bad.csv";
    {
        std::ofstream out(path);
        out << "t,I1\n0,0\n0.1,1\n0.3,0\n0.35,-1\n0.6,0\n";
    }
    CHECK_THROWS_AS(Waveform::from_csv(path), std::runtime_error);
    fs::remove_all(dir);
}
