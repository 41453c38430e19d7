#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mixsat/instance.hpp"

namespace mixsat {

enum class Value : std::int8_t { False = -1, Free = 0, True = 1 };

inline Value negate(Value v) { return static_cast<Value>(-static_cast<std::int8_t>(v)); }
inline int to_int(Value v) { return static_cast<int>(static_cast<std::int8_t>(v)); }

enum class ClauseStatus : std::uint8_t { Active, Satisfied, Falsified };

struct StatusChange {
  ClauseId clause = 0;
  ClauseStatus from = ClauseStatus::Active;
  ClauseStatus to = ClauseStatus::Active;

  friend bool operator==(const StatusChange&, const StatusChange&) = default;
};

// Per-variable stacks of watches on the clauses that are not yet satisfied.
// Satisfying a clause detaches it from the stacks of its free variables, so
// later assignments never visit it again; backtracking reattaches in LIFO
// order and restores every stack exactly. Each literal occurrence is
// visited exactly once over a complete assignment (either when its variable
// is assigned or when its clause is detached).
class WatchedStack {
 public:
  struct Watch {
    ClauseId clause = 0;
    std::int8_t sign = 1;
    std::int32_t position = 0;

    friend bool operator==(const Watch&, const Watch&) = default;
  };

  WatchedStack() = default;
  explicit WatchedStack(const Instance& instance);

  std::span<const Watch> live(Var v) const {
    const auto& s = stacks_[static_cast<std::size_t>(v)];
    return {s.data(), static_cast<std::size_t>(live_size_[static_cast<std::size_t>(v)])};
  }

  // Literal visits performed by assignments since construction / reset.
  std::uint64_t touches() const { return touches_; }
  void reset_touches() { touches_ = 0; }

  friend bool operator==(const WatchedStack& a, const WatchedStack& b) {
    return a.stacks_ == b.stacks_ && a.live_size_ == b.live_size_ && a.slot_ == b.slot_ &&
           a.undo_ == b.undo_;
  }

 private:
  friend class NodeState;

  struct Detached {
    Var var = 0;
    std::int32_t slot = 0;
    friend bool operator==(const Detached&, const Detached&) = default;
  };

  std::size_t flat(ClauseId j, std::int32_t position) const {
    return static_cast<std::size_t>(clause_offset_[static_cast<std::size_t>(j)] + position);
  }
  void detach(Var v, ClauseId j, std::int32_t position);
  void reattach();

  std::vector<std::vector<Watch>> stacks_;
  std::vector<std::int32_t> live_size_;
  std::vector<std::int32_t> clause_offset_;
  std::vector<std::int32_t> slot_;  // flat literal index -> index in its variable's stack
  std::vector<Detached> undo_;
  std::uint64_t touches_ = 0;
};

// Mutable view of a search node: partial assignment, trail, the per-clause
// truth coefficient s0 and clause statuses. Every assignment folds
// sign * value into s0; an unsatisfied clause is falsified once
// s0 == -1 - n_j. Satisfied clauses are frozen at the moment they become
// satisfied and are not touched again until backtracking.
class NodeState {
 public:
  NodeState() = default;
  explicit NodeState(const Instance& instance);

  const Instance& instance() const { return *instance_; }
  int num_vars() const { return instance_->num_vars(); }

  Value value(Var v) const { return assignment_[static_cast<std::size_t>(v)]; }
  bool is_free(Var v) const { return value(v) == Value::Free; }
  std::span<const Value> assignment() const { return assignment_; }
  std::span<const Var> trail() const { return trail_; }
  std::size_t trail_size() const { return trail_.size(); }

  int s0(ClauseId j) const { return s0_[static_cast<std::size_t>(j)]; }
  ClauseStatus status(ClauseId j) const { return status_[static_cast<std::size_t>(j)]; }
  int base_unsat() const { return base_unsat_; }
  int free_count() const { return free_count_; }
  int active_count() const { return active_count_; }

  const WatchedStack& watched() const { return watched_; }

  // Returns the status transitions caused by this assignment; the span is
  // valid until the next mutation. Throws std::logic_error if v is not free.
  std::span<const StatusChange> assign(Var v, Value value);

  // Undo assignments until the trail has `mark` entries.
  // Throws std::out_of_range if mark exceeds the trail length.
  void unassign_to(std::size_t mark);

  std::vector<Var> free_vars() const;

  // Member-wise equality including the watched stacks.
  friend bool operator==(const NodeState& a, const NodeState& b) {
    return a.instance_ == b.instance_ && a.assignment_ == b.assignment_ &&
           a.trail_ == b.trail_ && a.s0_ == b.s0_ && a.status_ == b.status_ &&
           a.base_unsat_ == b.base_unsat_ && a.free_count_ == b.free_count_ &&
           a.active_count_ == b.active_count_ && a.watched_ == b.watched_;
  }

 private:
  void unassign_last();

  struct Frame {
    std::size_t change_mark = 0;
  };

  const Instance* instance_ = nullptr;
  std::vector<Value> assignment_;
  std::vector<Var> trail_;
  std::vector<Frame> frames_;
  std::vector<int> s0_;
  std::vector<ClauseStatus> status_;
  std::vector<StatusChange> changes_;
  int base_unsat_ = 0;
  int free_count_ = 0;
  int active_count_ = 0;
  WatchedStack watched_;
};

}  // namespace mixsat
