#pragma once

#include <cstdint>
#include <string>

namespace mixsat {

// DIMACS CNF with m clauses over n variables. Each clause draws L distinct
// variables uniformly and independent uniform signs. Deterministic per seed.
// Throws std::invalid_argument if L > n or L < 1.
std::string generate_random(int n, int m, int clause_len, std::uint64_t seed);

}  // namespace mixsat
