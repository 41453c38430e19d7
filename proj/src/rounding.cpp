#include "mixsat/rounding.hpp"

#include <cmath>

#include "mixsat/kernels.hpp"

namespace mixsat {

int rounding_budget(int free_count, double c) {
  if (free_count <= 0) return 0;
  const int budget = static_cast<int>(std::ceil(c * std::sqrt(static_cast<double>(free_count))));
  return budget < 1 ? 1 : budget;
}

std::vector<std::int8_t> round_once(const Factor& factor, const NodeState& state, Rng& rng) {
  const auto k = static_cast<std::size_t>(factor.rank());
  std::vector<double> r(k);
  sample_sphere(rng, r);
  const auto v0 = factor.column(0);
  double truth = 0.0;
  for (std::size_t q = 0; q < k; ++q) truth += v0[q] * r[q];

  std::vector<std::int8_t> values(static_cast<std::size_t>(state.num_vars()) + 1, 1);
  for (Var v = 1; v <= state.num_vars(); ++v) {
    if (!state.is_free(v)) {
      values[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(to_int(state.value(v)));
      continue;
    }
    const auto vi = factor.column(v);
    double side = 0.0;
    for (std::size_t q = 0; q < k; ++q) side += vi[q] * r[q];
    values[static_cast<std::size_t>(v)] = truth * side < 0.0 ? -1 : 1;
  }
  return values;
}

int evaluate_node(const NodeState& state, std::span<const std::int8_t> values) {
  const Instance& inst = state.instance();
  int unsat = state.base_unsat();
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) != ClauseStatus::Active) continue;
    bool satisfied = false;
    for (const auto& l : inst.clause(j).literals) {
      if (l.sign * values[static_cast<std::size_t>(l.var)] > 0) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) ++unsat;
  }
  return unsat;
}

Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed) {
  return kernels::omp::best_rounding(factor, state, budget, seed);
}

}  // namespace mixsat
