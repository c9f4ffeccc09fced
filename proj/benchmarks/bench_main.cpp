#include <benchmark/benchmark.h>

#include "dtvmono/elliptic.hpp"
#include "dtvmono/heun.hpp"
#include "dtvmono/premodular.hpp"

namespace {

void BM_wp_eval(benchmark::State& state) {
    dtv::ModularParam mp(dtv::cplx(0.1, 1.2));
    dtv::cplx z{0.31, 0.27};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dtv::wp(z, mp));
    }
}
BENCHMARK(BM_wp_eval);

void BM_modular_param_setup(benchmark::State& state) {
    for (auto _ : state) {
        dtv::ModularParam mp(dtv::cplx(0.1, 1.2));
        benchmark::DoNotOptimize(mp.eta1());
    }
}
BENCHMARK(BM_modular_param_setup);

// weight-6 catalog form; dominated by the chain rule through the
// half-period frame
void BM_Z_weight6_eval(benchmark::State& state) {
    dtv::ModularParam mp(dtv::cplx(0.1, 1.2));
    const auto& form = dtv::catalog_form({4, 0, 0, 0});
    dtv::cplx r{0.31, 0.02}, s{0.27, 0.01};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dtv::Z_n(form, r, s, mp));
    }
}
BENCHMARK(BM_Z_weight6_eval);

void BM_transfer_cycle1(benchmark::State& state) {
    dtv::ModularParam mp(dtv::cplx(0.1, 1.2));
    const dtv::DTVIndex n{2, 0, 0, 0};
    const dtv::cplx B{1.1, 0.3};
    const auto path = dtv::cycle_path(1, mp);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dtv::transfer_along(n, B, mp, path));
    }
}
BENCHMARK(BM_transfer_cycle1);

} // namespace

BENCHMARK_MAIN();
