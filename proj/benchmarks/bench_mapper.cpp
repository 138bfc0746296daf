#include <benchmark/benchmark.h>

#include "cimdse/costmodel.hpp"
#include "cimdse/mapper.hpp"

namespace {

using namespace cimdse;

SystemConfig rf() {
  const auto p = load_primitive(std::string(CIMDSE_BENCH_DATA_DIR) + "/primitives/digital-6t-adder-tree.json");
  return build_config(default_template(), Placement::CimRf, &p);
}

const std::vector<GemmShape>& shapes() {
  static const auto s = synthetic_sweep(16, 8192, 256, 7);
  return s;
}

void BM_MapGemm(benchmark::State& state) {
  const auto cfg = state.range(0) == 0 ? default_template() : rf();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(map_gemm(shapes()[i++ % shapes().size()], cfg));
  }
}
BENCHMARK(BM_MapGemm)->Arg(0)->Arg(1)->ArgNames({"cim"});

void BM_Evaluate(benchmark::State& state) {
  const auto cfg = state.range(0) == 0 ? default_template() : rf();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(shapes()[i++ % shapes().size()], cfg));
  }
}
BENCHMARK(BM_Evaluate)->Arg(0)->Arg(1)->ArgNames({"cim"});

void BM_CountAccesses(benchmark::State& state) {
  const auto cfg = rf();
  const GemmShape g(4096, 4096, 4096);
  const auto m = map_gemm(g, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(count_accesses(m, g, cfg));
}
BENCHMARK(BM_CountAccesses);

void BM_HeuristicSearch(benchmark::State& state) {
  const auto cfg = rf();
  const GemmShape g(1024, 512, 2048);
  HeuristicOptions o;
  o.victory_limit = 0;
  o.max_samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_search(g, cfg, o));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HeuristicSearch)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
