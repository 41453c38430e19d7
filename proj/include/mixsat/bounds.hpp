#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mixsat/node_state.hpp"
#include "mixsat/sdp.hpp"

namespace mixsat {

struct BoundPair {
  double primal = 0.0;  // f(V) of the child at the copied factor
  double dual = 0.0;    // D(lambda) of the shifted certificate
};

enum class Decision { Expand, Prune, Solve };

const char* to_string(Decision d);

inline constexpr double kCeilTolerance = 1e-6;

// PRUNE if ceil(dual - tol) >= best; EXPAND if primal <= best; else SOLVE.
Decision decide(const BoundPair& bounds, int best_known, double tol = kCeilTolerance);

// Integer lower bound implied by a real-valued one.
inline int ceil_bound(double bound, double tol = kCeilTolerance) {
  return static_cast<int>(std::ceil(bound - tol));
}

struct Step {
  Var var = 0;
  Value value = Value::Free;
  friend bool operator==(const Step&, const Step&) = default;
};

// child lambda = parent lambda (newly assigned columns dropped) + xi with
// xi_0 = ||delta||_1 and xi_i = |delta_i|.
DualCert dual_init(const DualCert& parent, std::span<const double> delta,
                   std::span<const Var> newly_assigned, double child_const_offset);

// Warm-start bounds for the subproblems below a solved root, maintained
// along a depth-first walk. The primal side copies the root columns of the
// free variables and updates z_j by the coefficient move (remove s v_i, add
// s b v_0). The dual side treats every root-active clause by the same move,
// so C - C_hat is confined to the truth row/column:
//   delta_i = (s0_root - s0_child) s_ji / (4 n_j),   summed over clauses.
//
// Usage: after state.assign(v, b) call on_assign(state, v); before undoing
// it call on_unassign().
class ChildBounds {
 public:
  ChildBounds(const NodeState& root_state, const Factor& factor, const ZCache& zcache,
              const DualCert& root_cert);

  void on_assign(const NodeState& state, Var v);
  void on_unassign();

  double primal() const { return base_unsat_ + loss_sum_; }
  // base_unsat + sum_j max(0, loss_j) at the copied factor.
  double clipped() const { return base_unsat_ + clipped_sum_; }
  double dual() const;
  BoundPair bounds() const { return {primal(), dual()}; }

  std::span<const Step> path() const { return path_; }
  int depth() const { return static_cast<int>(path_.size()); }

  // Dense delta over columns 0..n (entry 0 unused, always 0).
  std::vector<double> delta() const;
  double child_const_offset() const;
  DualCert child_cert() const;

  const Factor& factor() const { return *factor_; }
  const DualCert& root_cert() const { return root_cert_; }

 private:
  struct Frame {
    double loss_sum = 0.0;
    double clipped_sum = 0.0;
    int base_unsat = 0;
    std::size_t undo_mark = 0;
  };

  // Fills delta_/touched lists; returns the child constant offset.
  double accumulate() const;
  void clear_scratch() const;

  const Instance* instance_ = nullptr;
  const Factor* factor_ = nullptr;
  DualCert root_cert_;
  double root_lambda_sum_ = 0.0;
  std::vector<std::uint8_t> root_active_;
  std::vector<int> root_s0_;
  std::vector<std::uint8_t> root_free_;

  ZCache z_;
  double loss_sum_ = 0.0;
  double clipped_sum_ = 0.0;
  int base_unsat_ = 0;
  std::vector<Step> path_;
  std::vector<Frame> frames_;
  std::vector<ClauseId> undo_clause_;
  std::vector<double> undo_z_;

  // scratch for dual(), cleared after every use
  mutable std::vector<double> delta_;
  mutable std::vector<std::uint8_t> delta_mark_;
  mutable std::vector<Var> delta_touched_;
  mutable std::vector<int> clause_move_;
  mutable std::vector<int> clause_count_;
  mutable std::vector<ClauseId> clause_touched_;
  mutable std::vector<std::uint8_t> on_path_;
};

}  // namespace mixsat
