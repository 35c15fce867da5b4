#include "support/helpers.hpp"
#include "wireorbit/params.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wireorbit;
using testsupport::bisect;

TEST_CASE("derived constants, canonical set") {
    // c = 1, coupling-squared 1, K = e^2
    const auto d = derived_constants(testsupport::canonical());
    CHECK(d.c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.c_sq == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.inv_sq_weight == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
}

TEST_CASE("derived constants, L = e and pz = 0 give x0 = e") {
    const PhysParams p(1.0, 0.0, two_pi, two_pi, std::exp(1.0), 0.0);
    const auto d = derived_constants(p);
    CHECK(d.inv_sq_weight == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(d.x0 == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(d.log_x0 == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("derived constants, I0 = 2 against a bisection oracle") {
    const PhysParams p(2.0, 0.0, two_pi, two_pi, 1.0, 0.0);
    const auto d = derived_constants(p);
    CHECK(d.c == doctest::Approx(2.0).epsilon(1e-15));
    // oracle: 4 x^2 ln x = 1 on (1, 2)
    const double x_oracle = bisect([](double x) { return 4.0 * x * x * std::log(x) - 1.0; },
                                   1.0 + 1e-12, 2.0);
    CHECK(std::abs(d.x0 - x_oracle) <= 1e-12 * x_oracle);
}

TEST_CASE("derived constants satisfy the defining relation") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 50; ++i) {
        const auto p = testsupport::random_params(rng);
        const auto d = derived_constants(p);
        const double recon = d.c_sq * d.x0 * d.x0 * std::log(d.x0);
        CHECK(std::abs(recon - d.inv_sq_weight) <= 1e-12 * d.inv_sq_weight);
        CHECK(d.x0 > 1.0);
        CHECK(d.log_x0 > 0.0);
    }
}

TEST_CASE("parameter validation rejects degenerate input") {
    CHECK_THROWS_AS(PhysParams(0.0, 0.0, two_pi, two_pi, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysParams(1.0, -0.1, two_pi, two_pi, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysParams(1.0, 0.0, -1.0, two_pi, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PhysParams(1.0, 0.0, two_pi, two_pi, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("omega1 is consistent with T1 by construction") {
    const PhysParams p(1.0, 0.0, 7.0, two_pi, 1.0, 0.0);
    CHECK(std::abs(p.omega1 * p.T1 - two_pi) <= 4.0 * two_pi * 1e-16);
}
