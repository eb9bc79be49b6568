// Serial reference versus OpenMP backend on the per-frequency kernels.

#include <benchmark/benchmark.h>

#include "tinet/cost.hpp"
#include "tinet/io.hpp"
#include "tinet/kernels.hpp"
#include "tinet/stability.hpp"

namespace {

const tinet::NetworkSpec& spec() {
    static const tinet::NetworkSpec s = tinet::io::load_spec(TINET_DATA_DIR "/single_mode.json");
    return s;
}

tinet::Backend backend_of(const benchmark::State& st) {
    return st.range(1) ? tinet::Backend::openmp : tinet::Backend::serial;
}

void BM_PointTerms(benchmark::State& st) {
    const tinet::ClosedLoopBlocks b = tinet::assemble(spec());
    tinet::kernels::CostModel m;
    m.blocks = &b;
    m.E = tinet::cost_output_matrix(spec().dims.n1, spec().controller.rt0());
    m.weights = spec().weights;
    m.theta1 = spec().theta1.theta;
    m.theta2 = spec().theta2.theta;
    m.gradients = true;
    const auto zs = tinet::FrequencyGrid::uniform(static_cast<int>(st.range(0))).points;
    for (auto _ : st) benchmark::DoNotOptimize(tinet::kernels::point_terms(m, zs, backend_of(st)));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_MaxRealEigs(benchmark::State& st) {
    const tinet::ClosedLoopBlocks b = tinet::assemble(spec());
    const auto zs = tinet::FrequencyGrid::uniform(static_cast<int>(st.range(0))).points;
    for (auto _ : st) benchmark::DoNotOptimize(tinet::kernels::max_real_eigs(b, zs, backend_of(st)));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_ThermoCost(benchmark::State& st) {
    for (auto _ : st)
        benchmark::DoNotOptimize(tinet::thermo_cost(spec(), static_cast<int>(st.range(0)), true, backend_of(st)));
}

// Second argument: 0 serial, 1 OpenMP.
BENCHMARK(BM_PointTerms)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MaxRealEigs)->ArgsProduct({{256, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ThermoCost)->ArgsProduct({{256}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
