#include "mm/arith.hpp"
#include "mm/bessel.hpp"
#include "mm/special.hpp"
#include "mm/transforms.hpp"

#include <benchmark/benchmark.h>

using namespace mm;

static void BM_LnGamma(benchmark::State& state) {
    cplx z(0.25, 180.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(special::ln_gamma(z));
        z += cplx(1e-9, 1e-9);
    }
}
BENCHMARK(BM_LnGamma);

static void BM_Kloosterman(benchmark::State& state) {
    const long long c = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(arith::kloosterman(3, 7, c));
    state.SetComplexityN(c);
}
BENCHMARK(BM_Kloosterman)->Arg(101)->Arg(1009)->Arg(10007)->Complexity();

static void BM_KloostermanModulus(benchmark::State& state) {
    arith::KloostermanModulus S(3001);
    long long a = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(S.sum(a, 7));
        a = a % 3000 + 1;
    }
}
BENCHMARK(BM_KloostermanModulus);

static void BM_BesselKbar(benchmark::State& state) {
    double t = 8.0, x = 3.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(special::bessel_kbar(t, x));
        x = (x < 40.0) ? x + 0.01 : 3.0;
    }
}
BENCHMARK(BM_BesselKbar);

static void BM_AfeTableBuild(benchmark::State& state) {
    auto par = special::LanglandsParams::unitary(0.6, -1.4);
    special::GammaFactorKind kind{special::GammaKind::minus, 50.0, par};
    auto spec = transforms::ContourSpec::for_afe(1e4, 50.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(transforms::AfeTransformTable(kind, 1, 16, spec));
}
BENCHMARK(BM_AfeTableBuild);

static void BM_PsiValue(benchmark::State& state) {
    auto psi = transforms::bump_on(50.0);
    transforms::PsiTransform tr(special::LanglandsParams{}, +1, psi, 2000.0, -0.55, 1e-6);
    double x = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(tr.value(x));
        x = (x < 1800.0) ? x * 1.01 : 1.0;
    }
}
BENCHMARK(BM_PsiValue);

BENCHMARK_MAIN();
