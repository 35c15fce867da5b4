#include "wireorbit/params.hpp"
#include "wireorbit/rootfind.hpp"

#include <cmath>
#include <stdexcept>

namespace wireorbit {

PhysParams::PhysParams(double I0_, double k_, double T1_, double mu0_, double L_, double pz_)
    : I0(I0_), k(k_), T1(T1_), omega1(two_pi / T1_), mu0(mu0_), L(L_), pz(pz_) {
    validate();
}

void PhysParams::validate() const {
    if (!(I0 > 0.0)) throw std::invalid_argument("PhysParams: I0 must be > 0");
    if (!(k >= 0.0)) throw std::invalid_argument("PhysParams: k must be >= 0");
    if (!(T1 > 0.0)) throw std::invalid_argument("PhysParams: T1 must be > 0");
    if (!(mu0 > 0.0)) throw std::invalid_argument("PhysParams: mu0 must be > 0");
    if (!(L > 0.0)) throw std::invalid_argument("PhysParams: L must be > 0");
    if (!std::isfinite(pz)) throw std::invalid_argument("PhysParams: pz must be finite");
    if (std::abs(omega1 * T1 - two_pi) > 4.0 * two_pi * 1e-16)
        throw std::invalid_argument("PhysParams: omega1*T1 != 2*pi");
}

DerivedParams derived_constants(const PhysParams& params) {
    params.validate();
    const double c = params.coupling();
    const double c_sq = c * c;
    const double K = params.L * params.L * std::exp(2.0 * params.pz / c);

    // K = c^2 * x^2 * ln(x) has a unique root on (1, inf) since the right
    // side grows from 0 monotonically there.
    auto fn = [&](double x) { return c_sq * x * x * std::log(x) - K; };
    auto dfn = [&](double x) { return c_sq * x * (2.0 * std::log(x) + 1.0); };

    const double seed = std::nextafter(1.0, 2.0);
    if (fn(seed) >= 0.0)
        throw std::runtime_error("derived_constants: no root with x0 > 1 (inconsistent parameters)");
    const auto [lo, hi] = rootfind::grow_bracket(fn, seed, +1);
    const double x0 = rootfind::newton_bisect(fn, dfn, lo, hi, 1e-15);

    return DerivedParams{c, c_sq, K, x0, std::log(x0)};
}

}  // namespace wireorbit
