#include "support/helpers.hpp"
#include "wireorbit/orbitfinder.hpp"
#include "wireorbit/periodmap.hpp"

#include <doctest.h>

#include <cmath>

using namespace wireorbit;

namespace {

PhysParams driven_params(double k) { return testsupport::canonical(k, 7.0); }

RadialState resonant_start(const PhysParams& p, int n) {
    const double H = invert_period(n * p.T1, p, 1e-11);
    return RadialState{turning_points(H, p).r_b, 0.0};
}

}  // namespace

TEST_CASE("stroboscopic map fixes the equilibrium at k = 0") {
    const auto p = driven_params(0.0);
    const auto f = FieldModel::constant_current();
    const auto out = stroboscopic_map(RadialState{1.0, 0.0}, p, f, 1);
    CHECK(std::abs(out.r - 1.0) <= 1e-12);
    CHECK(std::abs(out.pr) <= 1e-12);
}

TEST_CASE("at k = 0 every point of the resonant orbit is a fixed point") {
    const auto p = driven_params(0.0);
    const auto f = FieldModel::constant_current();
    const auto x0 = resonant_start(p, 1);
    const auto out = stroboscopic_map(x0, p, f, 1);
    CHECK(std::hypot(out.r - x0.r, out.pr - x0.pr) <= 1e-8);

    // also a point away from the section, reached by flowing a while
    const auto mid = flow(x0, 0.0, 2.3, p, f, 1e-12);
    const auto out2 = stroboscopic_map(mid, p, f, 1);
    CHECK(std::hypot(out2.r - mid.r, out2.pr - mid.pr) <= 1e-8);
}

TEST_CASE("stroboscopic map preserves area") {
    const auto p = driven_params(1e-3);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    for (const auto& s : {RadialState{1.8, 0.0}, RadialState{1.2, 0.4}}) {
        const double h = 1e-6 * (1.0 + std::hypot(s.r, s.pr));
        auto col = [&](int j, double sign) {
            RadialState x = s;
            (j == 0 ? x.r : x.pr) += sign * h;
            return stroboscopic_map(x, p, f, 1, 1e-13);
        };
        const auto rp = col(0, 1.0), rm = col(0, -1.0);
        const auto pp = col(1, 1.0), pm = col(1, -1.0);
        const double j00 = (rp.r - rm.r) / (2 * h), j01 = (pp.r - pm.r) / (2 * h);
        const double j10 = (rp.pr - rm.pr) / (2 * h), j11 = (pp.pr - pm.pr) / (2 * h);
        CHECK(std::abs(j00 * j11 - j01 * j10 - 1.0) <= 1e-6);
    }
}

TEST_CASE("find_orbit rejects the degenerate k = 0 problem") {
    const auto p = driven_params(0.0);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    CHECK_THROWS_AS(find_orbit(1, p, f, RadialState{1.9, 0.0}), std::invalid_argument);
}

TEST_CASE("find_orbit converges from the resonant seed and scales with k") {
    const auto f = FieldModel::bessel_harmonic(two_pi / 7.0);
    const auto p1 = driven_params(1e-3);
    const auto seed = resonant_start(driven_params(0.0), 1);

    const auto rec = find_orbit(1, p1, f, seed);
    CHECK(rec.residual <= 1e-9);
    CHECK(rec.newton_iterations <= 15);
    CHECK(rec.minimal_multiple == 1);
    CHECK_FALSE(rec.lower_period);
    CHECK(std::abs(rec.floquet[0] * rec.floquet[1]) ==
          doctest::Approx(1.0).epsilon(1e-6));

    // the orbit closes after exactly n T1
    const auto end = flow(rec.fixed_point, 0.0, p1.T1, p1, f, 1e-12);
    CHECK(std::hypot(end.r - rec.fixed_point.r, end.pr - rec.fixed_point.pr) <= 1e-8);

    // halving k roughly halves the distance to the unperturbed orbit
    const auto p2 = driven_params(5e-4);
    const auto rec2 = find_orbit(1, p2, f, seed);
    const double ratio = rec2.distance_to_unperturbed / rec.distance_to_unperturbed;
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.7);
}

TEST_CASE("scan catalogues distinct orbits with locked periods") {
    const auto p = driven_params(1e-3);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    const auto scans = scan_orbits(2, p, f);
    REQUIRE(scans.size() == 2);

    for (const auto& scan : scans) {
        CHECK(scan.melnikov_zero_count == 2 * scan.n);
        CHECK(!scan.orbits.empty());
        for (const auto& rec : scan.orbits) {
            CHECK(rec.residual <= 1e-9);
            CHECK(rec.minimal_multiple == scan.n);
            CHECK(std::abs(rec.floquet[0] * rec.floquet[1]) ==
                  doctest::Approx(1.0).epsilon(1e-6));
            // closure at the claimed multiple, none at smaller multiples
            const auto end =
                flow(rec.fixed_point, 0.0, rec.minimal_multiple * p.T1, p, f, 1e-12);
            CHECK(std::hypot(end.r - rec.fixed_point.r, end.pr - rec.fixed_point.pr) <= 1e-8);
            for (int d = 1; d < rec.minimal_multiple; ++d) {
                const auto mid = flow(rec.fixed_point, 0.0, d * p.T1, p, f, 1e-12);
                CHECK(std::hypot(mid.r - rec.fixed_point.r, mid.pr - rec.fixed_point.pr) >
                      1e-3);
            }
        }
    }

    // the subharmonic pair structure: one elliptic and one hyperbolic per order
    for (const auto& scan : scans) {
        int elliptic = 0, hyperbolic = 0;
        for (const auto& rec : scan.orbits) {
            elliptic += rec.kind == OrbitKind::elliptic;
            hyperbolic += rec.kind == OrbitKind::hyperbolic;
        }
        CHECK(elliptic >= 1);
        CHECK(hyperbolic >= 1);
    }
}

TEST_CASE("a search at n = 2 seeded on the harmonic orbit flags the lower period") {
    const auto p = driven_params(1e-3);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    // converge the harmonic (n = 1) orbit first, then hand it to an n = 2 search
    const auto mel = melnikov_fourier(1, testsupport::canonical(0.0, 7.0), f);
    const auto tp = turning_points(mel.H_n, testsupport::canonical(0.0, 7.0));
    const auto seed = flow(RadialState{tp.r_b, 0.0}, 0.0, p.T1 - mel.zeros.front(),
                           testsupport::canonical(0.0, 7.0),
                           FieldModel::constant_current(), 1e-12);
    const auto rec1 = find_orbit(1, p, f, seed);
    const auto rec2 = find_orbit(2, p, f, rec1.fixed_point);
    CHECK(rec2.lower_period);
    CHECK(rec2.minimal_multiple == 1);
}

TEST_CASE("orders below the minimal period yield empty catalogue entries") {
    // T1 = 3 < 2 pi: order 1 has no resonant orbit, order 3 does (9 > 2 pi)
    auto p = testsupport::canonical(1e-3, 3.0);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    const auto scans = scan_orbits(3, p, f);
    REQUIRE(scans.size() == 3);
    CHECK(scans[0].orbits.empty());
    CHECK(scans[0].melnikov_zero_count == 0);
    CHECK(scans[1].orbits.empty());  // 6 < 2 pi as well
    CHECK(!scans[2].orbits.empty());
}

TEST_CASE("energy window filters the scanned orders") {
    const auto p = driven_params(1e-3);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    // H_1 ~ 1.817, H_2 ~ 2.378: a window around H_1 only
    const auto scans = scan_orbits(2, p, f, std::pair{1.7, 2.0});
    REQUIRE(scans.size() == 2);
    CHECK(!scans[0].orbits.empty());
    CHECK(scans[1].orbits.empty());
}
