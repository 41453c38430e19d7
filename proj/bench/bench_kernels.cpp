#include <benchmark/benchmark.h>

#include "mixsat/generator.hpp"
#include "mixsat/kernels.hpp"
#include "mixsat/rounding.hpp"
#include "mixsat/sdp.hpp"

using namespace mixsat;

namespace {

struct Fixture {
  Instance instance;
  NodeState state;
  Factor factor;
  ZCache z;

  explicit Fixture(int n)
      : instance(parse_dimacs_string(generate_random(n, 4 * n, 3, 1))),
        state(instance),
        factor(init_factor(n, default_rank(n), 2)) {
    z.rebuild(state, factor);
  }
};

template <bool Parallel>
void column_duals(benchmark::State& s) {
  Fixture fx(static_cast<int>(s.range(0)));
  std::vector<double> lambda(static_cast<std::size_t>(fx.instance.num_vars()) + 1);
  for (auto _ : s) {
    if constexpr (Parallel) {
      kernels::omp::column_duals(fx.state, fx.factor, fx.z, lambda);
    } else {
      kernels::serial::column_duals(fx.state, fx.factor, fx.z, lambda);
    }
    benchmark::DoNotOptimize(lambda.data());
  }
}

template <bool Parallel>
void best_rounding(benchmark::State& s) {
  Fixture fx(static_cast<int>(s.range(0)));
  const int budget = rounding_budget(fx.instance.num_vars());
  for (auto _ : s) {
    auto r = Parallel ? kernels::omp::best_rounding(fx.factor, fx.state, budget, 3)
                      : kernels::serial::best_rounding(fx.factor, fx.state, budget, 3);
    benchmark::DoNotOptimize(r.unsat);
  }
}

template <bool Parallel>
void gray_minimum(benchmark::State& s) {
  const int n = static_cast<int>(s.range(0));
  const Instance inst = parse_dimacs_string(generate_random(n, 4 * n, 2, 4));
  for (auto _ : s) {
    auto r = Parallel ? kernels::omp::gray_minimum(inst) : kernels::serial::gray_minimum(inst);
    benchmark::DoNotOptimize(r.min_unsat);
  }
}

}  // namespace

BENCHMARK(column_duals<false>)->Name("column_duals/serial")->Arg(1000)->Arg(10000);
BENCHMARK(column_duals<true>)->Name("column_duals/omp")->Arg(1000)->Arg(10000);
BENCHMARK(best_rounding<false>)->Name("best_rounding/serial")->Arg(1000)->Arg(10000);
BENCHMARK(best_rounding<true>)->Name("best_rounding/omp")->Arg(1000)->Arg(10000);
BENCHMARK(gray_minimum<false>)->Name("gray_minimum/serial")->Arg(16)->Arg(20);
BENCHMARK(gray_minimum<true>)->Name("gray_minimum/omp")->Arg(16)->Arg(20);

BENCHMARK_MAIN();
