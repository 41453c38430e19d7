#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixsat/node_state.hpp"

namespace mixsat {

using Clock = std::chrono::steady_clock;

// Low-rank factor V: num_vars + 1 unit columns in R^rank, column-major.
// Column 0 is the truth direction and stays at e_1.
class Factor {
 public:
  Factor() = default;
  Factor(int rank, int num_vars)
      : rank_(rank), columns_(num_vars + 1),
        data_(static_cast<std::size_t>(rank) * static_cast<std::size_t>(num_vars + 1), 0.0) {}

  int rank() const { return rank_; }
  int num_columns() const { return columns_; }

  std::span<double> column(int i) {
    return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(rank_),
            static_cast<std::size_t>(rank_)};
  }
  std::span<const double> column(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(rank_),
            static_cast<std::size_t>(rank_)};
  }

  friend bool operator==(const Factor&, const Factor&) = default;

 private:
  int rank_ = 0;
  int columns_ = 0;
  std::vector<double> data_;
};

// ceil(sqrt(2 (n + 1))) + 1: strictly above the rank threshold that
// guarantees the low-rank problem has no spurious local optima.
int default_rank(int num_vars);

// Random unit columns (isotropic), column 0 = e_1. Deterministic per seed.
Factor init_factor(int num_vars, int rank, std::uint64_t seed);

// (||z||^2 - (n_j - 1)^2) / (4 n_j); n_j is the original clause length.
double clause_loss(std::span<const double> z, int clause_len);

// z_j = s0_j v_0 + sum over free literals of s_ji v_i, kept for active clauses.
class ZCache {
 public:
  ZCache() = default;

  void rebuild(const NodeState& state, const Factor& factor);

  int rank() const { return rank_; }
  std::span<double> z(ClauseId j) {
    return {data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rank_),
            static_cast<std::size_t>(rank_)};
  }
  std::span<const double> z(ClauseId j) const {
    return {data_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(rank_),
            static_cast<std::size_t>(rank_)};
  }

 private:
  int rank_ = 0;
  std::vector<double> data_;
};

// Dual certificate for the zero-diagonal cost matrix C' over columns 0..n.
// Lower bound on the node's SDP optimum (in unsat units):
//   -sum(lambda) + const_offset,
// with const_offset = base_unsat + sum_active (s0^2 + free_j - (n_j-1)^2)/(4 n_j),
// the part of the objective that is constant under unit-norm columns.
struct DualCert {
  std::vector<double> lambda;  // size n + 1, zero for assigned columns
  double const_offset = 0.0;
  double shift = 0.0;       // uniform eigenvalue repair added to coupled columns
  bool certified = false;   // C' + D_lambda verified PSD (after repair)

  double lambda_sum() const;
  double dual_bound() const { return const_offset - lambda_sum(); }
};

struct SdpConfig {
  double eps = 1e-2;
  int max_sweeps = 400;
  bool certify = true;
  int certify_max_columns = 512;
  std::optional<Clock::time_point> deadline;
  bool record_trace = false;
};

struct SdpResult {
  double objective_unsat = 0.0;
  DualCert dual;
  int sweeps_used = 0;
  double est_gap = 0.0;
  bool converged = true;  // false: max_sweeps or deadline hit before est_gap <= eps
  std::vector<double> trace;  // objective after each sweep (record_trace only)

  double dual_bound() const { return dual.dual_bound(); }
};

// base_unsat + sum over active clauses of clause_loss(z_j, n_j).
double objective(const NodeState& state, const ZCache& zcache);

// One block-coordinate pass over the free variables in `order` (assigned
// variables are skipped). Returns the objective after the pass.
double mixing_sweep(const NodeState& state, Factor& factor, ZCache& zcache,
                    std::span<const Var> order);

// Sweeps until the linear-convergence gap estimate drops below eps (or the
// sweep/time limit is reached), then recovers the dual certificate.
// zcache must be consistent with factor and state on entry.
SdpResult solve(const NodeState& state, Factor& factor, ZCache& zcache, const SdpConfig& config,
                std::span<const Var> order);

// lambda_i = ||V c_i||_2 for column 0 and every free column, C' zero-diagonal.
DualCert dual_from_primal(const NodeState& state, const Factor& factor, const ZCache& zcache);

// Shifts lambda uniformly on the coupled columns so that C' + D_lambda is
// PSD, using a dense eigenvalue computation. No-op (certified = false) when
// more than max_columns columns are coupled.
void certify_dual(const NodeState& state, DualCert& cert, int max_columns);

// Columns that appear in at least one active clause, plus column 0.
std::vector<int> coupled_columns(const NodeState& state);

// Estimated distance to the optimum from two successive decreases.
double estimate_gap(double prev_decrease, double decrease);

}  // namespace mixsat
