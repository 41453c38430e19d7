#pragma once

#include <climits>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mixsat/bounds.hpp"
#include "mixsat/instance.hpp"
#include "mixsat/node_state.hpp"
#include "mixsat/sdp.hpp"

namespace mixsat {

struct SolverConfig {
  double eps = 1e-2;
  int max_sweeps = 400;
  int rank = 0;  // 0 selects default_rank(n)
  std::uint64_t seed = 0;
  std::optional<double> time_limit;  // seconds
  int depth_limit = 8;
  double rounding_c = 4.0;
  bool certify = true;
};

struct Incumbent {
  std::vector<std::int8_t> values;  // size n + 1, values[0] unused
  int unsat = INT_MAX;
  double found_at = 0.0;  // seconds since the search started

  bool valid() const { return !values.empty(); }
};

struct SearchStats {
  std::uint64_t nodes_popped = 0;
  std::uint64_t popped_pruned = 0;  // dual pre-check fired at pop time
  std::uint64_t popped_leaves = 0;  // nothing left to relax
  std::uint64_t sdp_solves = 0;
  std::uint64_t solved_pruned = 0;  // pruned right after the node's own solve
  std::uint64_t sweeps_total = 0;
  std::uint64_t prunes_by_dual = 0;  // children killed inside expansions
  std::uint64_t expands_by_primal = 0;
  std::uint64_t children_pushed = 0;
  std::uint64_t leaves = 0;  // complete assignments reached inside expansions
  std::uint64_t roundings = 0;
  std::uint64_t incumbent_updates = 0;
  double wall_time = 0.0;
};

enum class SearchStatus { Optimum, Timeout };

struct SearchResult {
  Incumbent incumbent;
  SearchStatus status = SearchStatus::Timeout;
  SearchStats stats;
  int lower_bound = 0;  // ceil of the first root's dual bound
};

// Data shared by every subproblem emitted from one solved root.
struct RootData {
  Factor factor;
  std::vector<Var> order;  // root free variables by descending lambda
  std::vector<std::int8_t> preferred;  // best rounding at the root
};

struct SearchNode {
  std::vector<Step> path;  // every assignment from the empty node down
  BoundPair bounds;
  double priority = 0.0;  // clipped loss at the copied factor
  int depth = 0;          // assignments added below the parent root
  std::shared_ptr<const RootData> root;
  std::uint64_t seq = 0;
};

enum class ChildOutcome { Pruned, Expanded, Pushed, Leaf };

// Hooks for audits; the default implementation ignores everything.
class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  virtual void on_root(const NodeState& /*state*/, const Factor& /*factor*/,
                       const SdpResult& /*result*/) {}
  // Called with state and bounds positioned at the child.
  virtual void on_child(const NodeState& /*state*/, const ChildBounds& /*bounds*/,
                        ChildOutcome /*outcome*/, const BoundPair& /*pair*/) {}
};

using EmitFn = std::function<void(const Incumbent&)>;

class BranchAndBound {
 public:
  BranchAndBound(const Instance& instance, SolverConfig config, SearchObserver* observer = nullptr);

  // DFS over roots; OPTIMUM iff the queue drains (or the incumbent meets
  // the first root's bound) before the time limit.
  SearchResult solve_complete(const EmitFn& emit = {});
  // Best-first over roots keyed by clipped loss.
  SearchResult solve_incomplete(const EmitFn& emit = {});

  // Depth-limited DFS over the first depth_limit variables of root.order.
  // `best` caps the incumbent for the duration of the call; `inherited` is
  // a lower bound already known for the root's subtree.
  std::vector<SearchNode> expand_root(NodeState& state, const ZCache& zcache, const DualCert& cert,
                                      const std::shared_ptr<const RootData>& root, int best,
                                      double inherited = -1e300);

  // Installs values as the incumbent if strictly better. Re-verifies the
  // unsat count and throws std::logic_error on a mismatch.
  bool offer(std::span<const std::int8_t> values, int unsat);

  const Incumbent& incumbent() const { return incumbent_; }
  const SearchStats& stats() const { return stats_; }

 private:
  enum class Order { Lifo, BestFirst };

  SearchResult run(Order order, const EmitFn& emit);
  void process(NodeState& state, const SearchNode& node, std::vector<SearchNode>& children);
  void descend(NodeState& state, ChildBounds& cb, const std::shared_ptr<const RootData>& root,
               std::span<const Var> vars, std::size_t level, double root_dual,
               std::vector<SearchNode>& out);
  void leaf(const NodeState& state);
  int cutoff() const { return incumbent_.unsat < cap_ ? incumbent_.unsat : cap_; }
  double elapsed() const;

  const Instance* instance_;
  SolverConfig config_;
  SearchObserver* observer_;
  int rank_;
  Incumbent incumbent_;
  SearchStats stats_;
  EmitFn emit_;
  int cap_ = INT_MAX;
  int root_bound_ = 0;
  std::uint64_t seq_ = 0;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
};

inline SearchResult solve_complete(const Instance& instance, const SolverConfig& config,
                                   const EmitFn& emit = {}) {
  return BranchAndBound(instance, config).solve_complete(emit);
}

inline SearchResult solve_incomplete(const Instance& instance, const SolverConfig& config,
                                     const EmitFn& emit = {}) {
  return BranchAndBound(instance, config).solve_incomplete(emit);
}

// Sigma_j max(0, loss_j) + base_unsat of a subproblem.
inline double priority(const ChildBounds& bounds) { return bounds.clipped(); }

}  // namespace mixsat
