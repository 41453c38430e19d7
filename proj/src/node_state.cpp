#include "mixsat/node_state.hpp"

#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>

namespace mixsat {

WatchedStack::WatchedStack(const Instance& instance) {
  const auto n = static_cast<std::size_t>(instance.num_vars());
  stacks_.resize(n + 1);
  live_size_.assign(n + 1, 0);

  clause_offset_.resize(static_cast<std::size_t>(instance.num_clauses()) + 1, 0);
  for (ClauseId j = 0; j < instance.num_clauses(); ++j) {
    clause_offset_[static_cast<std::size_t>(j) + 1] =
        clause_offset_[static_cast<std::size_t>(j)] + instance.clause(j).size();
  }
  slot_.assign(instance.nnz(), 0);

  for (Var v = 1; v <= instance.num_vars(); ++v) {
    auto& stack = stacks_[static_cast<std::size_t>(v)];
    for (const auto& occ : instance.occurrences(v)) {
      slot_[flat(occ.clause, occ.position)] = static_cast<std::int32_t>(stack.size());
      stack.push_back({occ.clause, occ.sign, occ.position});
    }
    live_size_[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(stack.size());
  }
}

void WatchedStack::detach(Var v, ClauseId j, std::int32_t position) {
  auto& stack = stacks_[static_cast<std::size_t>(v)];
  auto& size = live_size_[static_cast<std::size_t>(v)];
  const std::int32_t at = slot_[flat(j, position)];
  const std::int32_t last = size - 1;
  assert(at <= last);
  std::swap(stack[static_cast<std::size_t>(at)], stack[static_cast<std::size_t>(last)]);
  slot_[flat(stack[static_cast<std::size_t>(at)].clause, stack[static_cast<std::size_t>(at)].position)] = at;
  slot_[flat(j, position)] = last;
  --size;
  undo_.push_back({v, at});
  ++touches_;
}

void WatchedStack::reattach() {
  const Detached d = undo_.back();
  undo_.pop_back();
  auto& stack = stacks_[static_cast<std::size_t>(d.var)];
  auto& size = live_size_[static_cast<std::size_t>(d.var)];
  const std::int32_t last = size++;
  std::swap(stack[static_cast<std::size_t>(last)], stack[static_cast<std::size_t>(d.slot)]);
  const auto& a = stack[static_cast<std::size_t>(last)];
  const auto& b = stack[static_cast<std::size_t>(d.slot)];
  slot_[flat(a.clause, a.position)] = last;
  slot_[flat(b.clause, b.position)] = d.slot;
}

NodeState::NodeState(const Instance& instance)
    : instance_(&instance),
      assignment_(static_cast<std::size_t>(instance.num_vars()) + 1, Value::Free),
      s0_(static_cast<std::size_t>(instance.num_clauses()), -1),
      status_(static_cast<std::size_t>(instance.num_clauses()), ClauseStatus::Active),
      base_unsat_(instance.empty_clauses()),
      free_count_(instance.num_vars()),
      active_count_(instance.num_clauses()),
      watched_(instance) {
  trail_.reserve(static_cast<std::size_t>(instance.num_vars()));
  frames_.reserve(static_cast<std::size_t>(instance.num_vars()));
}

std::span<const StatusChange> NodeState::assign(Var v, Value value) {
  if (v < 1 || v > num_vars()) throw std::logic_error("assign: variable out of range");
  if (value == Value::Free) throw std::logic_error("assign: value must be TRUE or FALSE");
  if (!is_free(v)) throw std::logic_error("assign: variable " + std::to_string(v) + " is not free");

  const std::size_t mark = changes_.size();
  frames_.push_back({mark});
  assignment_[static_cast<std::size_t>(v)] = value;
  --free_count_;
  trail_.push_back(v);

  const int val = to_int(value);
  for (const auto& w : watched_.live(v)) {
    ++watched_.touches_;
    const auto j = static_cast<std::size_t>(w.clause);
    const int lit = w.sign * val;
    s0_[j] += lit;
    if (lit > 0) {
      status_[j] = ClauseStatus::Satisfied;
      --active_count_;
      changes_.push_back({w.clause, ClauseStatus::Active, ClauseStatus::Satisfied});
      for (const auto& q : instance_->clause(w.clause).literals) {
        if (q.var != v && is_free(q.var)) {
          const auto pos = static_cast<std::int32_t>(&q - instance_->clause(w.clause).literals.data());
          watched_.detach(q.var, w.clause, pos);
        }
      }
    } else if (s0_[j] == -1 - instance_->clause(w.clause).size()) {
      status_[j] = ClauseStatus::Falsified;
      --active_count_;
      ++base_unsat_;
      changes_.push_back({w.clause, ClauseStatus::Active, ClauseStatus::Falsified});
    }
  }
  return std::span<const StatusChange>(changes_).subspan(mark);
}

void NodeState::unassign_last() {
  const Var v = trail_.back();
  const int val = to_int(value(v));
  const auto live = watched_.live(v);
  for (auto it = live.rbegin(); it != live.rend(); ++it) {
    const auto j = static_cast<std::size_t>(it->clause);
    const int lit = it->sign * val;
    if (lit > 0) {
      const auto& lits = instance_->clause(it->clause).literals;
      for (auto q = lits.rbegin(); q != lits.rend(); ++q) {
        if (q->var != v && is_free(q->var)) {
          assert(watched_.undo_.back().var == q->var);
          watched_.reattach();
        }
      }
      status_[j] = ClauseStatus::Active;
      ++active_count_;
    } else if (status_[j] == ClauseStatus::Falsified) {
      status_[j] = ClauseStatus::Active;
      ++active_count_;
      --base_unsat_;
    }
    s0_[j] -= lit;
  }
  assignment_[static_cast<std::size_t>(v)] = Value::Free;
  ++free_count_;
  trail_.pop_back();
  changes_.resize(frames_.back().change_mark);
  frames_.pop_back();
}

void NodeState::unassign_to(std::size_t mark) {
  if (mark > trail_.size()) {
    throw std::out_of_range("unassign_to: mark " + std::to_string(mark) +
                            " exceeds trail length " + std::to_string(trail_.size()));
  }
  while (trail_.size() > mark) unassign_last();
}

std::vector<Var> NodeState::free_vars() const {
  std::vector<Var> out;
  out.reserve(static_cast<std::size_t>(free_count_));
  for (Var v = 1; v <= num_vars(); ++v) {
    if (is_free(v)) out.push_back(v);
  }
  return out;
}

}  // namespace mixsat
