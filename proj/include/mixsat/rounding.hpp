#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mixsat/node_state.hpp"
#include "mixsat/rng.hpp"
#include "mixsat/sdp.hpp"

namespace mixsat {

struct Rounding {
  std::vector<std::int8_t> values;  // size n + 1, values[0] unused
  int unsat = 0;
};

// ceil(c * sqrt(free_count)), at least 1 when anything is free.
int rounding_budget(int free_count, double c = 4.0);

// Hyperplane rounding: free v_i -> sign(<v_0, r> <v_i, r>), ties to TRUE.
// Assigned variables keep their values.
std::vector<std::int8_t> round_once(const Factor& factor, const NodeState& state, Rng& rng);

// base_unsat plus the active clauses whose free literals are all false.
int evaluate_node(const NodeState& state, std::span<const std::int8_t> values);

// Best of `budget` roundings. Trial t draws from Rng(derive_seed(seed, t));
// ties keep the lowest trial index, so the result does not depend on the
// thread count.
Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed);

}  // namespace mixsat
