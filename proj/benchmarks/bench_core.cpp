#include "wireorbit/cylinder.hpp"
#include "wireorbit/integrate.hpp"
#include "wireorbit/melnikov.hpp"
#include "wireorbit/model.hpp"
#include "wireorbit/periodmap.hpp"
#include "wireorbit/potential.hpp"
#include "wireorbit/verify.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace wireorbit;

PhysParams canonical(double k = 0.0, double T1 = two_pi) {
    return PhysParams(1.0, k, T1, two_pi, 1.0, 1.0);
}

void BM_VectorField(benchmark::State& state) {
    const auto p = canonical();
    const auto f = FieldModel::constant_current();
    RadialState s{1.7, 0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vector_field(0.0, s, p, f));
    }
}
BENCHMARK(BM_VectorField);

void BM_VectorFieldHarmonic(benchmark::State& state) {
    const auto p = canonical(1e-3, 7.0);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    RadialState s{1.7, 0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vector_field(0.4, s, p, f));
    }
}
BENCHMARK(BM_VectorFieldHarmonic);

void BM_CylinderY0(benchmark::State& state) {
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cyl_y0(x));
        x = x < 30.0 ? x + 0.37 : 0.3;
    }
}
BENCHMARK(BM_CylinderY0);

void BM_PeriodQuadrature(benchmark::State& state) {
    const auto p = canonical();
    for (auto _ : state) {
        benchmark::DoNotOptimize(period(2.0, p));
    }
}
BENCHMARK(BM_PeriodQuadrature);

void BM_ReturnTime(benchmark::State& state) {
    const auto p = canonical();
    const auto tp = turning_points(2.0, p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(return_time(RadialState{tp.r_b, 0.0}, p, 1e-11));
    }
}
BENCHMARK(BM_ReturnTime);

void BM_StroboscopicMap(benchmark::State& state) {
    const auto p = canonical(1e-3, 7.0);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    const RadialState s{1.4, 0.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(flow(s, 0.0, p.T1, p, f, 1e-12));
    }
}
BENCHMARK(BM_StroboscopicMap);

void BM_DelayedPotential(benchmark::State& state) {
    const auto w = Waveform::sine(two_pi);
    for (auto _ : state) {
        benchmark::DoNotOptimize(delayed_potential(1.3, 2.0, w));
    }
}
BENCHMARK(BM_DelayedPotential);

void BM_MelnikovFourier(benchmark::State& state) {
    const auto p = canonical(0.0, 7.0);
    const auto f = FieldModel::bessel_harmonic(p.omega1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(melnikov_fourier(1, p, f));
    }
}
BENCHMARK(BM_MelnikovFourier);

void BM_SignChecks(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sign_checks(1e-9));
    }
}
BENCHMARK(BM_SignChecks);

}  // namespace

BENCHMARK_MAIN();
