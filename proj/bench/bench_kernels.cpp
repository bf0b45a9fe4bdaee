#include <benchmark/benchmark.h>

#include "ratile/io.hpp"

using namespace ratile;

namespace {

const TileContext& ex2() {
  static const TileContext ctx = [] {
    auto p = parse_problem(builtin_problem("ex2"));
    return TileContext(p.spec, p.D);
  }();
  return ctx;
}

void BM_ExpandTree(benchmark::State& state) {
  const auto& ctx = ex2();
  const bool parallel = state.range(1) != 0;
  const std::vector<std::int64_t> root(2, 0);
  std::size_t nodes = 0;
  for (auto _ : state) {
    auto tree = expand_tree(ctx.frame, root, static_cast<int>(state.range(0)), 50000000, parallel);
    nodes = tree.levels.back().size();
    benchmark::DoNotOptimize(tree);
  }
  state.counters["leaves"] = static_cast<double>(nodes);
}
BENCHMARK(BM_ExpandTree)->ArgsProduct({{20, 28}, {0, 1}})->ArgNames({"depth", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  const auto& ctx = ex2();
  const int k = static_cast<int>(state.range(0));
  const bool parallel = state.range(1) != 0;
  auto a = approximate_G(ctx, LaurentElem(), k);
  auto b = approximate_G(ctx, LaurentElem::constant(4), k);
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(a.arch, b.arch, 2, parallel));
  state.counters["points"] = static_cast<double>(a.size() + b.size());
}
BENCHMARK(BM_Hausdorff)->ArgsProduct({{16, 22}, {0, 1}})->ArgNames({"depth", "parallel"})->Unit(benchmark::kMillisecond);

void BM_Histogram(benchmark::State& state) {
  const auto& ctx = ex2();
  const bool parallel = state.range(0) != 0;
  std::vector<TileCloud> clouds;
  for (const auto& x : lattice_points_in_box(ctx, ctx.translates, {-6, -6}, {6, 6}))
    clouds.push_back(approximate_G(ctx, x, 12));
  const auto cells = cell_family(clouds);
  for (auto _ : state)
    benchmark::DoNotOptimize(covering_histogram(cells, {-3, -3}, {3, 3}, 20000, 7, parallel));
  state.counters["cells"] = static_cast<double>(cells.tile.size());
}
BENCHMARK(BM_Histogram)->Arg(0)->Arg(1)->ArgNames({"parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
