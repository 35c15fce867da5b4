#include "wireorbit/orbitfinder.hpp"
#include "wireorbit/integrate.hpp"
#include "wireorbit/periodmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wireorbit {
namespace {

using Mat2 = std::array<std::array<double, 2>, 2>;

double dist(const RadialState& a, const RadialState& b) {
    return std::hypot(a.r - b.r, a.pr - b.pr);
}

/// Central-difference Jacobian of the n-fold stroboscopic map.
Mat2 map_jacobian(const RadialState& x, const PhysParams& params, const FieldModel& field,
                  int n, const FinderOptions& opt) {
    const double h = opt.fd_step * (1.0 + std::hypot(x.r, x.pr));
    Mat2 jac{};
    for (int col = 0; col < 2; ++col) {
        RadialState xp = x, xm = x;
        (col == 0 ? xp.r : xp.pr) += h;
        (col == 0 ? xm.r : xm.pr) -= h;
        const RadialState fp = stroboscopic_map(xp, params, field, n, opt.integrate_tol);
        const RadialState fm = stroboscopic_map(xm, params, field, n, opt.integrate_tol);
        jac[0][col] = (fp.r - fm.r) / (2.0 * h);
        jac[1][col] = (fp.pr - fm.pr) / (2.0 * h);
    }
    return jac;
}

std::array<std::complex<double>, 2> eigenvalues(const Mat2& m) {
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double disc = 0.25 * tr * tr - det;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {std::complex<double>(0.5 * tr + s, 0.0),
                std::complex<double>(0.5 * tr - s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {std::complex<double>(0.5 * tr, s), std::complex<double>(0.5 * tr, -s)};
}

OrbitKind classify(const Mat2& m) {
    const double tr = m[0][0] + m[1][1];
    constexpr double margin = 1e-6;
    if (std::abs(tr) < 2.0 - margin) return OrbitKind::elliptic;
    if (std::abs(tr) > 2.0 + margin) return OrbitKind::hyperbolic;
    return OrbitKind::parabolic;
}

/// Sup over the perturbed orbit of the distance to the Gamma_n polyline.
double sup_distance_to_orbit(const RadialState& fixed_point, int n, const PhysParams& params,
                             const FieldModel& field, const DenseSolution& gamma,
                             double gamma_period, const FinderOptions& opt) {
    constexpr int gamma_samples = 2048;
    std::vector<RadialState> poly(gamma_samples);
    for (int i = 0; i < gamma_samples; ++i)
        poly[i] = gamma.state(gamma_period * i / gamma_samples);

    auto point_to_polyline = [&](const RadialState& p) {
        double best = 1e300;
        for (int i = 0; i < gamma_samples; ++i) {
            const RadialState& a = poly[i];
            const RadialState& b = poly[(i + 1) % gamma_samples];
            const double vx = b.r - a.r, vy = b.pr - a.pr;
            const double wx = p.r - a.r, wy = p.pr - a.pr;
            const double vv = vx * vx + vy * vy;
            double s = vv > 0.0 ? (vx * wx + vy * wy) / vv : 0.0;
            s = std::clamp(s, 0.0, 1.0);
            best = std::min(best, std::hypot(wx - s * vx, wy - s * vy));
        }
        return best;
    };

    const double period = n * params.T1;
    const auto perturbed =
        integrate_dense(fixed_point, 0.0, period, params, field, opt.integrate_tol);
    constexpr int probe = 512;
    double sup = 0.0;
    for (int i = 0; i < probe; ++i)
        sup = std::max(sup, point_to_polyline(perturbed.state(period * i / probe)));
    return sup;
}

}  // namespace

RadialState stroboscopic_map(const RadialState& state, const PhysParams& params,
                             const FieldModel& field, int n, double tol) {
    if (n < 1) throw std::invalid_argument("stroboscopic_map: n must be >= 1");
    return flow(state, 0.0, n * params.T1, params, field, tol);
}

OrbitRecord find_orbit(int n, const PhysParams& params, const FieldModel& field,
                       const RadialState& seed, const FinderOptions& options) {
    if (n < 1) throw std::invalid_argument("find_orbit: n must be >= 1");
    if (params.k == 0.0)
        throw std::invalid_argument(
            "find_orbit: k = 0 is degenerate (unperturbed orbits are non-isolated)");
    if (params.k > options.k_max)
        throw std::invalid_argument("find_orbit: k exceeds the perturbative-regime bound");

    PhysParams p0 = params;
    p0.k = 0.0;
    RadialState x = seed;
    RadialState mapped = stroboscopic_map(x, params, field, n, options.integrate_tol);
    double residual = std::hypot(mapped.r - x.r, mapped.pr - x.pr);
    int iterations = 0;
    int slides = 0;
    int crawling = 0;
    bool converged = residual <= options.newton_tol;

    auto slide_along_orbit = [&] {
        x = flow(x, 0.0, n * params.T1 / 8.0, p0, field, options.integrate_tol);
        mapped = stroboscopic_map(x, params, field, n, options.integrate_tol);
        residual = std::hypot(mapped.r - x.r, mapped.pr - x.pr);
        crawling = 0;
    };
    for (int it = 1; it <= options.max_newton && !converged; ++it) {
        iterations = it;
        const double gr = mapped.r - x.r;
        const double gp = mapped.pr - x.pr;

        Mat2 jac = map_jacobian(x, params, field, n, options);
        jac[0][0] -= 1.0;
        jac[1][1] -= 1.0;
        const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (det == 0.0 || !std::isfinite(det))
            throw std::runtime_error("find_orbit: singular Newton Jacobian");
        double dr = (jac[1][1] * gr - jac[0][1] * gp) / det;
        double dpr = (jac[0][0] * gp - jac[1][0] * gr) / det;

        // near an extremum of the splitting function the Jacobian is almost
        // singular along the orbit and the raw step can be enormous; cap it
        const double step_norm = std::hypot(dr, dpr);
        const double cap = 0.5 * (1.0 + std::hypot(x.r, x.pr));
        if (step_norm > cap) {
            dr *= cap / step_norm;
            dpr *= cap / step_norm;
        }

        // backtracking keeps the iteration inside the Newton basin even when
        // the seed sits near an extremum of the splitting function
        bool accepted = false;
        double lambda = 1.0;
        for (int trial = 0; trial < 8; ++trial, lambda *= 0.5) {
            const RadialState x_try{x.r - lambda * dr, x.pr - lambda * dpr};
            if (!(x_try.r > 0.0)) continue;
            const RadialState m_try =
                stroboscopic_map(x_try, params, field, n, options.integrate_tol);
            const double res_try = std::hypot(m_try.r - x_try.r, m_try.pr - x_try.pr);
            if (res_try < residual) {
                x = x_try;
                mapped = m_try;
                residual = res_try;
                accepted = true;
                crawling = lambda < 0.25 ? crawling + 1 : 0;
                break;
            }
        }
        if (!accepted || crawling >= 3) {
            // stalled on or crawling along the splitting-function plateau:
            // slide along the unperturbed orbit toward a zero's basin
            if (++slides > 8)
                throw std::runtime_error(
                    "find_orbit: Newton stalled (no descent along the computed step)");
            slide_along_orbit();
        }
        converged = residual <= options.newton_tol;
    }
    if (!converged)
        throw std::runtime_error("find_orbit: Newton did not converge within the iteration cap");

    OrbitRecord rec;
    rec.n = n;
    rec.fixed_point = x;
    rec.residual = residual;
    rec.k = params.k;
    rec.newton_iterations = iterations;

    const Mat2 monodromy = map_jacobian(x, params, field, n, options);
    rec.floquet = eigenvalues(monodromy);
    rec.kind = classify(monodromy);

    // minimal radial period among the divisors of n
    rec.minimal_multiple = n;
    const double scale = 1.0 + std::hypot(x.r, x.pr);
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const RadialState xd = stroboscopic_map(x, params, field, d, options.integrate_tol);
        if (dist(xd, x) <= 1e-8 * scale) {
            rec.minimal_multiple = d;
            rec.lower_period = true;
            break;
        }
    }

    // distance to the unperturbed resonant orbit
    MelnikovOptions morbit = options.melnikov;
    morbit.integrate_tol = options.integrate_tol;
    const auto eq = equilibrium(params);
    if (n * params.T1 > eq.T0_lin) {
        const double H_n = invert_period(n * params.T1, params, morbit.invert_tol);
        const auto tp = turning_points(H_n, params);
        auto unperturbed = FieldModel::constant_current();
        PhysParams p0 = params;
        p0.k = 0.0;
        const auto gamma = integrate_dense(RadialState{tp.r_b, 0.0}, 0.0, n * params.T1, p0,
                                           unperturbed, options.integrate_tol);
        rec.distance_to_unperturbed =
            sup_distance_to_orbit(x, n, params, field, gamma, n * params.T1, options);
    }
    return rec;
}

std::vector<ResonanceScan> scan_orbits(int n_max, const PhysParams& params,
                                       const FieldModel& field,
                                       std::optional<std::pair<double, double>> energy_range,
                                       const FinderOptions& options) {
    if (n_max < 1) throw std::invalid_argument("scan_orbits: n_max must be >= 1");
    const auto eq = equilibrium(params);
    PhysParams p0 = params;
    p0.k = 0.0;

    std::vector<ResonanceScan> result;
    for (int n = 1; n <= n_max; ++n) {
        ResonanceScan scan;
        scan.n = n;
        if (!(n * params.T1 > eq.T0_lin)) {
            result.push_back(std::move(scan));  // below the minimal period: empty entry
            continue;
        }

        const MelnikovResult mel = melnikov_fourier(n, p0, field, options.melnikov);
        scan.H_n = mel.H_n;
        scan.melnikov_zero_count = static_cast<int>(mel.zeros.size());
        if (energy_range &&
            (mel.H_n < energy_range->first || mel.H_n > energy_range->second)) {
            result.push_back(std::move(scan));
            continue;
        }

        // seed at the Melnikov zero phases: the predicted fixed point at the
        // t = 0 section is Gamma_n at time -t0 (= period - t0 on the closed orbit)
        const auto tp = turning_points(mel.H_n, params);
        const double period_n = n * params.T1;
        auto unperturbed = FieldModel::constant_current();
        const auto gamma = integrate_dense(RadialState{tp.r_b, 0.0}, 0.0, period_n, p0,
                                           unperturbed, options.integrate_tol);

        for (double t0 : mel.zeros) {
            double ts = period_n - t0;
            if (ts >= period_n) ts -= period_n;
            const RadialState seed = gamma.state(ts);
            OrbitRecord rec;
            try {
                rec = find_orbit(n, params, field, seed, options);
            } catch (const std::runtime_error&) {
                ++scan.failed_seeds;
                continue;
            }

            // points related by the time-T1 map are one physical orbit
            bool duplicate = false;
            const double tol = options.dedup_tol * (1.0 + std::hypot(rec.fixed_point.r,
                                                                     rec.fixed_point.pr));
            RadialState image = rec.fixed_point;
            for (int j = 0; j < n && !duplicate; ++j) {
                for (const auto& kept : scan.orbits)
                    if (dist(image, kept.fixed_point) <= tol) { duplicate = true; break; }
                if (j + 1 < n)
                    image = stroboscopic_map(image, params, field, 1, options.integrate_tol);
            }
            if (!duplicate) scan.orbits.push_back(std::move(rec));
        }
        result.push_back(std::move(scan));
    }
    return result;
}

}  // namespace wireorbit
