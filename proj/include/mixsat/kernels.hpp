#pragma once

#include <cstdint>
#include <span>

#include "mixsat/instance.hpp"
#include "mixsat/node_state.hpp"
#include "mixsat/rounding.hpp"
#include "mixsat/sdp.hpp"

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version that must return bit-identical results; the OpenMP
// versions only fork when the work is large enough to pay for a team.
namespace mixsat::kernels {

struct GrayMinimum {
  int min_unsat = 0;
  std::uint64_t index = 0;  // Gray-code step of the first optimum
};

// Assignment reached at Gray-code step t: bit (v-1) set means v is FALSE.
inline std::uint64_t gray_code(std::uint64_t t) { return t ^ (t >> 1); }

namespace serial {

void column_duals(const NodeState& state, const Factor& factor, const ZCache& zcache,
                  std::span<double> lambda);
Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed);
GrayMinimum gray_minimum(const Instance& instance);

}  // namespace serial

namespace omp {

void column_duals(const NodeState& state, const Factor& factor, const ZCache& zcache,
                  std::span<double> lambda);
Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed);
GrayMinimum gray_minimum(const Instance& instance);

}  // namespace omp

}  // namespace mixsat::kernels
