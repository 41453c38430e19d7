#include "mixsat/search.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "mixsat/rng.hpp"
#include "mixsat/rounding.hpp"

namespace mixsat {

namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kRoundingStream = 1;

// Trail prefix shared with `path`, in steps.
std::size_t common_prefix(const NodeState& state, std::span<const Step> path) {
  const auto trail = state.trail();
  std::size_t p = 0;
  while (p < trail.size() && p < path.size() && trail[p] == path[p].var &&
         state.value(trail[p]) == path[p].value) {
    ++p;
  }
  return p;
}

std::vector<Step> trail_steps(const NodeState& state) {
  std::vector<Step> steps;
  steps.reserve(state.trail_size());
  for (const Var v : state.trail()) steps.push_back({v, state.value(v)});
  return steps;
}

struct HeapOrder {
  bool operator()(const SearchNode& a, const SearchNode& b) const {
    if (a.priority != b.priority) return a.priority > b.priority;
    return a.seq > b.seq;
  }
};

}  // namespace

BranchAndBound::BranchAndBound(const Instance& instance, SolverConfig config, SearchObserver* observer)
    : instance_(&instance),
      config_(config),
      observer_(observer),
      rank_(config.rank > 0 ? config.rank : default_rank(std::max(1, instance.num_vars()))),
      start_(Clock::now()) {
  if (rank_ < 2) throw std::invalid_argument("rank must be at least 2");
  if (config_.depth_limit < 1) throw std::invalid_argument("depth limit must be at least 1");
  if (!(config_.eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

double BranchAndBound::elapsed() const {
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

bool BranchAndBound::offer(std::span<const std::int8_t> values, int unsat) {
  if (unsat >= incumbent_.unsat) return false;
  const int check = evaluate(*instance_, values);
  if (check != unsat) {
    throw std::logic_error("incumbent claims " + std::to_string(unsat) + " unsat but evaluates to " +
                           std::to_string(check));
  }
  incumbent_.values.assign(values.begin(), values.end());
  incumbent_.unsat = unsat;
  incumbent_.found_at = elapsed();
  ++stats_.incumbent_updates;
  if (emit_) emit_(incumbent_);
  return true;
}

void BranchAndBound::leaf(const NodeState& state) {
  std::vector<std::int8_t> values(static_cast<std::size_t>(state.num_vars()) + 1, 1);
  for (Var v = 1; v <= state.num_vars(); ++v) {
    if (!state.is_free(v)) values[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(to_int(state.value(v)));
  }
  offer(values, state.base_unsat());
}

SearchResult BranchAndBound::solve_complete(const EmitFn& emit) {
  emit_ = emit;
  return run(Order::Lifo, emit);
}

SearchResult BranchAndBound::solve_incomplete(const EmitFn& emit) {
  emit_ = emit;
  return run(Order::BestFirst, emit);
}

SearchResult BranchAndBound::run(Order order, const EmitFn& emit) {
  emit_ = emit;
  start_ = Clock::now();
  deadline_.reset();
  if (config_.time_limit) {
    deadline_ = start_ + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(*config_.time_limit));
  }
  incumbent_ = Incumbent{};
  stats_ = SearchStats{};
  cap_ = INT_MAX;
  root_bound_ = 0;
  seq_ = 0;

  NodeState state(*instance_);
  std::vector<SearchNode> stack;
  std::priority_queue<SearchNode, std::vector<SearchNode>, HeapOrder> heap;
  const auto push = [&](SearchNode&& node) {
    if (order == Order::Lifo) {
      stack.push_back(std::move(node));
    } else {
      heap.push(std::move(node));
    }
  };
  const auto empty = [&] { return order == Order::Lifo ? stack.empty() : heap.empty(); };
  const auto pop = [&] {
    SearchNode node;
    if (order == Order::Lifo) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      node = heap.top();
      heap.pop();
    }
    return node;
  };

  SearchNode initial;
  initial.seq = seq_++;
  push(std::move(initial));

  SearchStatus status = SearchStatus::Optimum;
  std::vector<SearchNode> children;
  while (!empty()) {
    if (stats_.nodes_popped > 0) {
      if (incumbent_.unsat <= root_bound_) break;
      if (deadline_ && Clock::now() >= *deadline_) {
        status = SearchStatus::Timeout;
        break;
      }
    }
    SearchNode node = pop();
    ++stats_.nodes_popped;
    if (ceil_bound(node.bounds.dual) >= incumbent_.unsat) {
      ++stats_.popped_pruned;
      continue;
    }
    state.unassign_to(common_prefix(state, node.path));
    for (std::size_t p = state.trail_size(); p < node.path.size(); ++p) {
      state.assign(node.path[p].var, node.path[p].value);
    }
    children.clear();
    process(state, node, children);
    for (auto it = children.rbegin(); it != children.rend(); ++it) push(std::move(*it));
  }

  SearchResult result;
  result.incumbent = incumbent_;
  result.status = status;
  result.lower_bound = root_bound_;
  stats_.wall_time = elapsed();
  result.stats = stats_;
  emit_ = nullptr;
  return result;
}

void BranchAndBound::process(NodeState& state, const SearchNode& node, std::vector<SearchNode>& children) {
  const bool initial = node.root == nullptr;
  if (state.free_count() == 0 || state.active_count() == 0) {
    ++stats_.popped_leaves;
    leaf(state);
    return;
  }

  std::vector<Var> order;
  Factor factor;
  if (initial) {
    factor = init_factor(state.num_vars(), rank_, derive_seed(config_.seed, kInitStream));
    order = state.free_vars();
  } else {
    factor = node.root->factor;
    order.reserve(static_cast<std::size_t>(state.free_count()));
    for (const Var v : node.root->order) {
      if (state.is_free(v)) order.push_back(v);
    }
  }

  ZCache zcache;
  zcache.rebuild(state, factor);
  SdpConfig sdp;
  sdp.eps = config_.eps;
  sdp.max_sweeps = config_.max_sweeps;
  sdp.certify = config_.certify;
  sdp.deadline = deadline_;
  const SdpResult result = solve(state, factor, zcache, sdp, order);
  ++stats_.sdp_solves;
  stats_.sweeps_total += static_cast<std::uint64_t>(result.sweeps_used);
  if (observer_) observer_->on_root(state, factor, result);

  const double root_dual = std::max(result.dual_bound(), node.bounds.dual);
  if (initial) root_bound_ = std::max(0, ceil_bound(root_dual));
  if (ceil_bound(root_dual) >= incumbent_.unsat) {
    ++stats_.solved_pruned;
    return;
  }

  const int budget = rounding_budget(state.free_count(), config_.rounding_c);
  const std::uint64_t seed = derive_seed(derive_seed(config_.seed, kRoundingStream), stats_.sdp_solves);
  Rounding rounding = best_rounding(factor, state, budget, seed);
  stats_.roundings += static_cast<std::uint64_t>(budget);
  offer(rounding.values, rounding.unsat);
  if (ceil_bound(root_dual) >= incumbent_.unsat) {
    ++stats_.solved_pruned;
    return;
  }

  auto root = std::make_shared<RootData>();
  root->order = state.free_vars();
  std::stable_sort(root->order.begin(), root->order.end(), [&](Var a, Var b) {
    return result.dual.lambda[static_cast<std::size_t>(a)] > result.dual.lambda[static_cast<std::size_t>(b)];
  });
  root->preferred = std::move(rounding.values);
  root->factor = std::move(factor);

  children = expand_root(state, zcache, result.dual, root, incumbent_.unsat, node.bounds.dual);
}

std::vector<SearchNode> BranchAndBound::expand_root(NodeState& state, const ZCache& zcache,
                                                    const DualCert& cert,
                                                    const std::shared_ptr<const RootData>& root, int best,
                                                    double inherited) {
  std::vector<SearchNode> out;
  const int saved_cap = cap_;
  cap_ = best;
  const double root_dual = std::max(cert.dual_bound(), inherited);
  if (ceil_bound(root_dual) < cutoff() && state.free_count() > 0) {
    std::vector<Var> vars;
    for (const Var v : root->order) {
      if (static_cast<int>(vars.size()) >= config_.depth_limit) break;
      if (state.is_free(v)) vars.push_back(v);
    }
    ChildBounds cb(state, root->factor, zcache, cert);
    descend(state, cb, root, vars, 0, root_dual, out);
  }
  cap_ = saved_cap;
  return out;
}

void BranchAndBound::descend(NodeState& state, ChildBounds& cb, const std::shared_ptr<const RootData>& root,
                             std::span<const Var> vars, std::size_t level, double root_dual,
                             std::vector<SearchNode>& out) {
  const Var v = vars[level];
  const int preferred = root->preferred.empty() ? 1 : root->preferred[static_cast<std::size_t>(v)];
  for (const int b : {preferred, -preferred}) {
    const std::size_t mark = state.trail_size();
    state.assign(v, static_cast<Value>(b));
    cb.on_assign(state, v);

    BoundPair pair;
    ChildOutcome outcome;
    if (state.free_count() == 0 || state.active_count() == 0) {
      pair = {static_cast<double>(state.base_unsat()), static_cast<double>(state.base_unsat())};
      outcome = ChildOutcome::Leaf;
      ++stats_.leaves;
      leaf(state);
    } else {
      pair = cb.bounds();
      pair.dual = std::max(pair.dual, root_dual);
      const Decision d = decide(pair, cutoff());
      if (d == Decision::Prune) {
        outcome = ChildOutcome::Pruned;
        ++stats_.prunes_by_dual;
      } else if (d == Decision::Expand && level + 1 < vars.size()) {
        outcome = ChildOutcome::Expanded;
        ++stats_.expands_by_primal;
      } else {
        outcome = ChildOutcome::Pushed;
        ++stats_.children_pushed;
      }
    }
    if (observer_) observer_->on_child(state, cb, outcome, pair);

    if (outcome == ChildOutcome::Expanded) {
      descend(state, cb, root, vars, level + 1, root_dual, out);
    } else if (outcome == ChildOutcome::Pushed) {
      SearchNode node;
      node.path = trail_steps(state);
      node.bounds = pair;
      node.priority = std::max(0.0, priority(cb));
      node.depth = cb.depth();
      node.root = root;
      node.seq = seq_++;
      out.push_back(std::move(node));
    }

    cb.on_unassign();
    state.unassign_to(mark);
  }
}

}  // namespace mixsat
