#include <doctest.h>

#include <cmath>

#include "mixsat/generator.hpp"
#include "mixsat/kernels.hpp"
#include "mixsat/oracle.hpp"
#include "mixsat/sdp.hpp"

using namespace mixsat;

namespace {

const char* kThree = "p cnf 2 3\n1 2 0\n-1 2 0\n-2 0\n";

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// z_j recomputed from the factor for every active clause, compared with the cache.
double zcache_error(const NodeState& st, const Factor& f, const ZCache& z) {
  const Instance& inst = st.instance();
  double worst = 0.0;
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (st.status(j) != ClauseStatus::Active) continue;
    std::vector<double> expect(static_cast<std::size_t>(f.rank()), 0.0);
    for (int r = 0; r < f.rank(); ++r) expect[static_cast<std::size_t>(r)] = st.s0(j) * f.column(0)[static_cast<std::size_t>(r)];
    for (const auto& l : inst.clause(j).literals) {
      if (!st.is_free(l.var)) continue;
      for (int r = 0; r < f.rank(); ++r) expect[static_cast<std::size_t>(r)] += l.sign * f.column(l.var)[static_cast<std::size_t>(r)];
    }
    for (int r = 0; r < f.rank(); ++r) worst = std::max(worst, std::abs(expect[static_cast<std::size_t>(r)] - z.z(j)[static_cast<std::size_t>(r)]));
  }
  return worst;
}

}  // namespace

TEST_CASE("default rank") {
  CHECK(default_rank(120) == 17);
  CHECK(default_rank(1) == 3);
  CHECK(default_rank(7) == 5);
  CHECK_THROWS_AS(default_rank(0), std::invalid_argument);
}

TEST_CASE("init_factor is deterministic with unit columns and fixed truth") {
  const Factor a = init_factor(3, 4, 11);
  const Factor b = init_factor(3, 4, 11);
  CHECK(a == b);
  CHECK_FALSE(a == init_factor(3, 4, 12));
  CHECK(a.column(0)[0] == 1.0);
  for (int i = 0; i <= 3; ++i) CHECK(norm(a.column(i)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(init_factor(3, 1, 0), std::invalid_argument);
}

TEST_CASE("init_factor is isotropic") {
  const Factor f = init_factor(2000, 8, 3);
  double mean = 0.0;
  for (int p = 1; p <= 1000; ++p) {
    const auto a = f.column(2 * p - 1);
    const auto b = f.column(2 * p);
    double dot = 0.0;
    for (int r = 0; r < 8; ++r) dot += a[static_cast<std::size_t>(r)] * b[static_cast<std::size_t>(r)];
    mean += dot;
  }
  CHECK(std::abs(mean / 1000.0) < 0.1);
}

TEST_CASE("clause loss at integral points") {
  CHECK(clause_loss(std::vector<double>{-3.0, 0.0}, 2) == doctest::Approx(1.0));
  CHECK(clause_loss(std::vector<double>{-1.0, 0.0}, 2) == doctest::Approx(0.0));
  CHECK(clause_loss(std::vector<double>{0.0, 0.0}, 3) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("objective with no active clauses is base_unsat") {
  const auto inst = parse_dimacs_string("p cnf 2 4\n1 0\n-1 0\n2 0\n-2 0\n");
  NodeState st(inst);
  st.assign(1, Value::True);
  st.assign(2, Value::True);
  Factor f = init_factor(2, 3, 0);
  ZCache z;
  z.rebuild(st, f);
  CHECK(objective(st, z) == 2.0);
  const auto r = solve(st, f, z, SdpConfig{}, st.free_vars());
  CHECK(r.sweeps_used == 0);
  CHECK(r.objective_unsat == 2.0);
  CHECK(r.dual_bound() == doctest::Approx(2.0));
  for (double l : r.dual.lambda) CHECK(l == 0.0);
}

TEST_CASE("single clause at the all-false rank-1 factor") {
  const auto inst = parse_dimacs_string("p cnf 2 1\n1 2 0\n");
  NodeState st(inst);
  Factor f(3, 2);
  f.column(0)[0] = 1.0;
  f.column(1)[0] = -1.0;
  f.column(2)[0] = -1.0;
  ZCache z;
  z.rebuild(st, f);
  CHECK(objective(st, z) == doctest::Approx(1.0));
}

TEST_CASE("unit clause update aligns with the truth direction") {
  const auto inst = parse_dimacs_string("p cnf 1 1\n1 0\n");
  NodeState st(inst);
  Factor f = init_factor(1, 3, 5);
  ZCache z;
  z.rebuild(st, f);
  const std::vector<Var> order{1};
  const double after = mixing_sweep(st, f, z, order);
  CHECK(f.column(1)[0] == doctest::Approx(1.0));
  CHECK(after == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("objective matches dense recomputation") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = parse_dimacs_string(generate_random(5, 10, 2 + static_cast<int>(seed % 2), seed));
    NodeState st(inst);
    if (seed % 3 == 0) st.assign(2, Value::False);
    Factor f = init_factor(5, 4, seed);
    ZCache z;
    z.rebuild(st, f);
    const auto dense = oracle::dense_sdp_check(st, f, dual_from_primal(st, f, z));
    CHECK(objective(st, z) == doctest::Approx(dense.objective).epsilon(1e-9));
  }
}

TEST_CASE("sweeps are monotone, keep unit norms and keep the cache consistent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = parse_dimacs_string(generate_random(30, 120, 2 + static_cast<int>(seed % 2), seed));
    NodeState st(inst);
    st.assign(1 + static_cast<Var>(seed % 30), Value::True);
    Factor f = init_factor(30, default_rank(30), seed);
    ZCache z;
    z.rebuild(st, f);
    const auto order = st.free_vars();
    double prev = objective(st, z);
    for (int t = 0; t < 15; ++t) {
      const double now = mixing_sweep(st, f, z, order);
      CHECK(now <= prev + 1e-12);
      prev = now;
    }
    CHECK(prev == doctest::Approx(objective(st, z)).epsilon(1e-9));
    CHECK(zcache_error(st, f, z) < 1e-9);
    for (int i = 0; i <= 30; ++i) CHECK(norm(f.column(i)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.column(0)[0] == 1.0);
  }
}

TEST_CASE("three-clause example: sandwich and integer bound") {
  const auto inst = parse_dimacs_string(kThree);
  NodeState st(inst);
  Factor f = init_factor(2, default_rank(2), 1);
  ZCache z;
  z.rebuild(st, f);
  SdpConfig cfg;
  cfg.eps = 1e-2;
  const auto r = solve(st, f, z, cfg, st.free_vars());
  CHECK(r.sweeps_used < 50);
  CHECK(r.dual_bound() <= r.objective_unsat + 1e-9);
  CHECK(r.objective_unsat <= 1.0 + 1e-9);
  CHECK(std::abs(r.objective_unsat - r.dual_bound()) <= 3 * cfg.eps);
  CHECK(static_cast<int>(std::ceil(r.dual_bound() - 1e-6)) == 1);
}

TEST_CASE("converged duals certify the cost matrix") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = parse_dimacs_string(generate_random(14, 50, 2 + static_cast<int>(seed % 2), seed));
    NodeState st(inst);
    if (seed % 2) st.assign(3, Value::False);
    Factor f = init_factor(14, default_rank(14), seed);
    ZCache z;
    z.rebuild(st, f);
    SdpConfig cfg;
    cfg.eps = 1e-8;
    cfg.max_sweeps = 1000;
    const auto r = solve(st, f, z, cfg, st.free_vars());
    const auto dense = oracle::dense_sdp_check(st, f, r.dual);
    CHECK(r.dual.certified);
    CHECK(dense.min_eig >= -1e-6);
    CHECK(r.dual_bound() <= r.objective_unsat + 1e-9);
    CHECK(dense.objective == doctest::Approx(r.objective_unsat).epsilon(1e-9));
  }
}

TEST_CASE("raw duals are weakly dual and certification only lowers the bound") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = parse_dimacs_string(generate_random(20, 80, 2, 40 + seed));
    NodeState st(inst);
    Factor f = init_factor(20, default_rank(20), seed);
    ZCache z;
    z.rebuild(st, f);
    for (int t = 0; t < 3; ++t) mixing_sweep(st, f, z, st.free_vars());
    DualCert raw = dual_from_primal(st, f, z);
    CHECK(raw.dual_bound() <= objective(st, z) + 1e-9);
    DualCert fixed = raw;
    certify_dual(st, fixed, 512);
    CHECK(fixed.certified);
    CHECK(fixed.shift >= 0.0);
    CHECK(fixed.dual_bound() <= raw.dual_bound() + 1e-12);
    CHECK(oracle::dense_sdp_check(st, f, fixed).min_eig >= -1e-9);
  }
}

TEST_CASE("certification is skipped above the column cap") {
  const auto inst = parse_dimacs_string(generate_random(20, 80, 2, 1));
  NodeState st(inst);
  Factor f = init_factor(20, 4, 0);
  ZCache z;
  z.rebuild(st, f);
  DualCert cert = dual_from_primal(st, f, z);
  const double before = cert.dual_bound();
  certify_dual(st, cert, 5);
  CHECK_FALSE(cert.certified);
  CHECK(cert.dual_bound() == before);
}

TEST_CASE("low-precision solves are flagged") {
  const auto inst = parse_dimacs_string(generate_random(60, 240, 2, 2));
  NodeState st(inst);
  Factor f = init_factor(60, default_rank(60), 0);
  ZCache z;
  z.rebuild(st, f);
  SdpConfig cfg;
  cfg.eps = 1e-14;
  cfg.max_sweeps = 3;
  const auto r = solve(st, f, z, cfg, st.free_vars());
  CHECK(r.sweeps_used == 3);
  CHECK_FALSE(r.converged);
  CHECK(r.dual_bound() <= r.objective_unsat + 1e-9);
}

TEST_CASE("gap estimate") {
  CHECK(estimate_gap(1.0, 0.5) == doctest::Approx(0.5));
  CHECK(estimate_gap(1.0, 0.0) == 0.0);
  CHECK(estimate_gap(0.1, 1.0) == doctest::Approx(0.999 / 0.001));
}

TEST_CASE("serial and parallel column duals agree") {
  const auto inst = parse_dimacs_string(generate_random(300, 1500, 3, 8));
  NodeState st(inst);
  st.assign(5, Value::True);
  Factor f = init_factor(300, default_rank(300), 1);
  ZCache z;
  z.rebuild(st, f);
  std::vector<double> a(301);
  std::vector<double> b(301);
  kernels::serial::column_duals(st, f, z, a);
  kernels::omp::column_duals(st, f, z, b);
  CHECK(a == b);
}
