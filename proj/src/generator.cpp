#include "mixsat/generator.hpp"

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "mixsat/rng.hpp"

namespace mixsat {

std::string generate_random(int n, int m, int clause_len, std::uint64_t seed) {
  if (clause_len < 1) throw std::invalid_argument("clause length must be at least 1");
  if (clause_len > n) {
    throw std::invalid_argument("clause length " + std::to_string(clause_len) + " exceeds " +
                                std::to_string(n) + " variables");
  }
  if (m < 0) throw std::invalid_argument("clause count must be non-negative");

  // Explicit arithmetic keeps the output identical across standard libraries.
  std::uint64_t state = seed;
  const auto next = [&state] {
    state += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
  };
  const auto below = [&next](std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  };

  std::ostringstream out;
  out << "p cnf " << n << ' ' << m << '\n';
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  for (int j = 0; j < m; ++j) {
    // Partial Fisher-Yates over the first clause_len slots.
    for (int p = 0; p < clause_len; ++p) {
      const auto q = p + static_cast<int>(below(static_cast<std::uint64_t>(n - p)));
      std::swap(pool[static_cast<std::size_t>(p)], pool[static_cast<std::size_t>(q)]);
      const int lit = (next() & 1U) ? -pool[static_cast<std::size_t>(p)] : pool[static_cast<std::size_t>(p)];
      out << lit << ' ';
    }
    out << "0\n";
  }
  return out.str();
}

}  // namespace mixsat
