#include <doctest.h>

#include "mixsat/bounds.hpp"
#include "mixsat/generator.hpp"
#include "mixsat/kernels.hpp"
#include "mixsat/rounding.hpp"

using namespace mixsat;

TEST_CASE("rounding budget") {
  CHECK(rounding_budget(0) == 0);
  CHECK(rounding_budget(100) == 40);
  CHECK(rounding_budget(10000) / rounding_budget(100) == 10);
  CHECK(rounding_budget(1, 0.01) == 1);
  CHECK(rounding_budget(9, 2.0) == 6);
}

TEST_CASE("rank-1 integral factor rounds to its encoded assignment") {
  const auto inst = parse_dimacs_string(generate_random(6, 10, 2, 1));
  NodeState st(inst);
  const std::vector<std::int8_t> encoded{1, 1, -1, -1, 1, 1, -1};
  Factor f(3, 6);
  f.column(0)[0] = 1.0;
  for (Var v = 1; v <= 6; ++v) f.column(v)[0] = encoded[static_cast<std::size_t>(v)];
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    CHECK(round_once(f, st, rng) == encoded);
  }
}

TEST_CASE("negating the whole factor leaves the rounding unchanged") {
  const auto inst = parse_dimacs_string(generate_random(8, 20, 2, 2));
  NodeState st(inst);
  const Factor f = init_factor(8, 4, 9);
  Factor g(4, 8);
  for (int i = 0; i <= 8; ++i) {
    for (int r = 0; r < 4; ++r) g.column(i)[static_cast<std::size_t>(r)] = -f.column(i)[static_cast<std::size_t>(r)];
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng a(s);
    Rng b(s);
    CHECK(round_once(f, st, a) == round_once(g, st, b));
  }
}

TEST_CASE("assigned variables are kept") {
  const auto inst = parse_dimacs_string(generate_random(10, 30, 3, 3));
  NodeState st(inst);
  st.assign(2, Value::False);
  st.assign(7, Value::True);
  const Factor f = init_factor(10, 4, 1);
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    const auto v = round_once(f, st, rng);
    CHECK(v[2] == -1);
    CHECK(v[7] == 1);
  }
  const auto best = best_rounding(f, st, 0, 5);
  CHECK(best.values[2] == -1);
  CHECK(best.values[7] == 1);
  CHECK(best.values[1] == 1);
}

TEST_CASE("best of 100 roundings on the three-clause example") {
  const auto inst = parse_dimacs_string("p cnf 2 3\n1 2 0\n-1 2 0\n-2 0\n");
  NodeState st(inst);
  Factor f = init_factor(2, default_rank(2), 4);
  ZCache z;
  z.rebuild(st, f);
  solve(st, f, z, SdpConfig{}, st.free_vars());
  CHECK(best_rounding(f, st, 100, 1).unsat == 1);
}

TEST_CASE("budget 1 is a single rounding") {
  const auto inst = parse_dimacs_string(generate_random(15, 60, 2, 4));
  NodeState st(inst);
  const Factor f = init_factor(15, 5, 2);
  Rng rng(derive_seed(77, 0));
  const auto once = round_once(f, st, rng);
  const auto best = best_rounding(f, st, 1, 77);
  CHECK(best.values == once);
  CHECK(best.unsat == evaluate_node(st, once));
  CHECK(best.unsat == evaluate(inst, once));
}

TEST_CASE("rounded unsat never beats the dual bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = parse_dimacs_string(generate_random(20, 80, 2 + static_cast<int>(seed % 2), seed));
    NodeState st(inst);
    Factor f = init_factor(20, default_rank(20), seed);
    ZCache z;
    z.rebuild(st, f);
    const auto r = solve(st, f, z, SdpConfig{}, st.free_vars());
    const auto best = best_rounding(f, st, rounding_budget(20), seed);
    CHECK(best.unsat >= ceil_bound(r.dual_bound()));
    CHECK(best.unsat == evaluate(inst, best.values));
  }
}

TEST_CASE("serial and parallel best rounding agree") {
  const auto inst = parse_dimacs_string(generate_random(200, 800, 2, 6));
  NodeState st(inst);
  st.assign(3, Value::True);
  const Factor f = init_factor(200, default_rank(200), 3);
  for (const int budget : {1, 7, 64, 300}) {
    const auto a = kernels::serial::best_rounding(f, st, budget, 19);
    const auto b = kernels::omp::best_rounding(f, st, budget, 19);
    CHECK(a.unsat == b.unsat);
    CHECK(a.values == b.values);
  }
}
