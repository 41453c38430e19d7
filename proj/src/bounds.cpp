#include "mixsat/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace mixsat {

const char* to_string(Decision d) {
  switch (d) {
    case Decision::Expand: return "EXPAND";
    case Decision::Prune: return "PRUNE";
    case Decision::Solve: return "SOLVE";
  }
  return "?";
}

Decision decide(const BoundPair& bounds, int best_known, double tol) {
  if (ceil_bound(bounds.dual, tol) >= best_known) return Decision::Prune;
  if (bounds.primal <= best_known) return Decision::Expand;
  return Decision::Solve;
}

DualCert dual_init(const DualCert& parent, std::span<const double> delta,
                   std::span<const Var> newly_assigned, double child_const_offset) {
  DualCert child = parent;
  for (const Var a : newly_assigned) child.lambda[static_cast<std::size_t>(a)] = 0.0;
  double l1 = 0.0;
  for (std::size_t i = 1; i < delta.size(); ++i) {
    const double d = std::abs(delta[i]);
    child.lambda[i] += d;
    l1 += d;
  }
  child.lambda[0] += l1;
  child.const_offset = child_const_offset;
  return child;
}

ChildBounds::ChildBounds(const NodeState& root_state, const Factor& factor, const ZCache& zcache,
                         const DualCert& root_cert)
    : instance_(&root_state.instance()),
      factor_(&factor),
      root_cert_(root_cert),
      root_lambda_sum_(root_cert.lambda_sum()),
      z_(zcache),
      base_unsat_(root_state.base_unsat()) {
  const Instance& inst = *instance_;
  const auto m = static_cast<std::size_t>(inst.num_clauses());
  const auto cols = static_cast<std::size_t>(inst.num_vars()) + 1;
  root_active_.assign(m, 0);
  root_s0_.assign(m, 0);
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    root_s0_[static_cast<std::size_t>(j)] = root_state.s0(j);
    if (root_state.status(j) != ClauseStatus::Active) continue;
    root_active_[static_cast<std::size_t>(j)] = 1;
    const double loss = clause_loss(z_.z(j), inst.clause(j).size());
    loss_sum_ += loss;
    clipped_sum_ += std::max(0.0, loss);
  }
  delta_.assign(cols, 0.0);
  delta_mark_.assign(cols, 0);
  on_path_.assign(cols, 0);
  root_free_.assign(cols, 0);
  for (Var v = 1; v <= inst.num_vars(); ++v) root_free_[static_cast<std::size_t>(v)] = root_state.is_free(v) ? 1 : 0;
  clause_move_.assign(m, 0);
  clause_count_.assign(m, 0);
}

void ChildBounds::on_assign(const NodeState& state, Var v) {
  const Instance& inst = *instance_;
  const int b = to_int(state.value(v));
  frames_.push_back({loss_sum_, clipped_sum_, base_unsat_, undo_clause_.size()});
  path_.push_back({v, state.value(v)});
  on_path_[static_cast<std::size_t>(v)] = 1;

  const auto k = static_cast<std::size_t>(factor_->rank());
  const auto v0 = factor_->column(0);
  const auto vv = factor_->column(v);
  for (const auto& w : state.watched().live(v)) {
    auto zj = z_.z(w.clause);
    undo_clause_.push_back(w.clause);
    undo_z_.insert(undo_z_.end(), zj.begin(), zj.end());
    const int len = inst.clause(w.clause).size();
    const double before = clause_loss(zj, len);
    const double s = w.sign;
    for (std::size_t r = 0; r < k; ++r) zj[r] += s * (b * v0[r] - vv[r]);
    const double after = state.status(w.clause) == ClauseStatus::Active ? clause_loss(zj, len) : 0.0;
    loss_sum_ += after - before;
    clipped_sum_ += std::max(0.0, after) - std::max(0.0, before);
  }
  base_unsat_ = state.base_unsat();
}

void ChildBounds::on_unassign() {
  const Frame frame = frames_.back();
  frames_.pop_back();
  const auto k = static_cast<std::size_t>(factor_->rank());
  while (undo_clause_.size() > frame.undo_mark) {
    auto zj = z_.z(undo_clause_.back());
    std::copy(undo_z_.end() - static_cast<std::ptrdiff_t>(k), undo_z_.end(), zj.begin());
    undo_z_.resize(undo_z_.size() - k);
    undo_clause_.pop_back();
  }
  loss_sum_ = frame.loss_sum;
  clipped_sum_ = frame.clipped_sum;
  base_unsat_ = frame.base_unsat;
  on_path_[static_cast<std::size_t>(path_.back().var)] = 0;
  path_.pop_back();
}

double ChildBounds::accumulate() const {
  const Instance& inst = *instance_;
  for (const Step& step : path_) {
    const int b = to_int(step.value);
    for (const auto& occ : inst.occurrences(step.var)) {
      const auto j = static_cast<std::size_t>(occ.clause);
      if (!root_active_[j]) continue;
      if (clause_count_[j] == 0) clause_touched_.push_back(occ.clause);
      clause_move_[j] += b * occ.sign;
      clause_count_[j] += 1;
    }
  }

  double offset = root_cert_.const_offset;
  for (const ClauseId j : clause_touched_) {
    const auto ju = static_cast<std::size_t>(j);
    const Clause& clause = inst.clause(j);
    const double w = 1.0 / (4.0 * clause.size());
    const int s0_root = root_s0_[ju];
    const int free_root = clause.size() + 1 + s0_root;
    const int s0_child = s0_root + clause_move_[ju];
    const int free_child = free_root - clause_count_[ju];
    offset += (static_cast<double>(s0_child) * s0_child + free_child -
               static_cast<double>(s0_root) * s0_root - free_root) * w;
    const double move = clause_move_[ju];
    for (const auto& l : clause.literals) {
      const auto i = static_cast<std::size_t>(l.var);
      if (on_path_[i] || !root_free_[i]) continue;
      if (!delta_mark_[i]) {
        delta_mark_[i] = 1;
        delta_touched_.push_back(l.var);
      }
      delta_[i] -= move * l.sign * w;
    }
  }
  return offset;
}

void ChildBounds::clear_scratch() const {
  for (const Var i : delta_touched_) {
    delta_[static_cast<std::size_t>(i)] = 0.0;
    delta_mark_[static_cast<std::size_t>(i)] = 0;
  }
  delta_touched_.clear();
  for (const ClauseId j : clause_touched_) {
    clause_move_[static_cast<std::size_t>(j)] = 0;
    clause_count_[static_cast<std::size_t>(j)] = 0;
  }
  clause_touched_.clear();
}

double ChildBounds::dual() const {
  const double offset = accumulate();
  double lambda_sum = root_lambda_sum_;
  for (const Step& step : path_) lambda_sum -= root_cert_.lambda[static_cast<std::size_t>(step.var)];
  double l1 = 0.0;
  for (const Var i : delta_touched_) l1 += std::abs(delta_[static_cast<std::size_t>(i)]);
  clear_scratch();
  return offset - lambda_sum - 2.0 * l1;
}

std::vector<double> ChildBounds::delta() const {
  accumulate();
  std::vector<double> out(delta_);
  clear_scratch();
  return out;
}

double ChildBounds::child_const_offset() const {
  const double offset = accumulate();
  clear_scratch();
  return offset;
}

DualCert ChildBounds::child_cert() const {
  const double offset = accumulate();
  std::vector<double> d(delta_);
  clear_scratch();
  std::vector<Var> assigned;
  assigned.reserve(path_.size());
  for (const Step& step : path_) assigned.push_back(step.var);
  return dual_init(root_cert_, d, assigned, offset);
}

}  // namespace mixsat
