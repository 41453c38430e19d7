#include "mixsat/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <climits>
#include <cmath>
#include <vector>

namespace mixsat::kernels {

namespace {

// Below this many flops-ish units a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 15;

double truth_column_dual(const NodeState& state, const Factor& factor, const ZCache& zcache,
                         std::vector<double>& g) {
  const Instance& inst = state.instance();
  const auto k = static_cast<std::size_t>(factor.rank());
  const auto v0 = factor.column(0);
  std::fill(g.begin(), g.end(), 0.0);
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) != ClauseStatus::Active) continue;
    const double s0 = state.s0(j);
    const double coeff = s0 / (4.0 * inst.clause(j).size());
    const auto zj = zcache.z(j);
    for (std::size_t r = 0; r < k; ++r) g[r] += coeff * (zj[r] - s0 * v0[r]);
  }
  double n2 = 0.0;
  for (double x : g) n2 += x * x;
  return std::sqrt(n2);
}

double free_column_dual(const NodeState& state, const Factor& factor, const ZCache& zcache, Var i,
                        std::vector<double>& g) {
  const Instance& inst = state.instance();
  const auto k = static_cast<std::size_t>(factor.rank());
  const auto vi = factor.column(i);
  std::fill(g.begin(), g.end(), 0.0);
  for (const auto& w : state.watched().live(i)) {
    const double s = w.sign;
    const double coeff = s / (4.0 * inst.clause(w.clause).size());
    const auto zj = zcache.z(w.clause);
    for (std::size_t r = 0; r < k; ++r) g[r] += coeff * (zj[r] - s * vi[r]);
  }
  double n2 = 0.0;
  for (double x : g) n2 += x * x;
  return std::sqrt(n2);
}

struct Trial {
  int unsat = INT_MAX;
  int index = -1;
};

bool better(const Trial& a, const Trial& b) {
  return a.unsat < b.unsat || (a.unsat == b.unsat && a.index < b.index);
}

Trial run_trial(const Factor& factor, const NodeState& state, std::uint64_t seed, int t) {
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
  const auto values = round_once(factor, state, rng);
  return {evaluate_node(state, values), t};
}

Rounding finish(const Factor& factor, const NodeState& state, std::uint64_t seed, Trial best) {
  Rounding out;
  if (best.index < 0) {
    // Zero budget: keep assigned values, free variables TRUE.
    out.values.assign(static_cast<std::size_t>(state.num_vars()) + 1, 1);
    for (Var v = 1; v <= state.num_vars(); ++v) {
      if (!state.is_free(v)) out.values[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(to_int(state.value(v)));
    }
    out.unsat = evaluate_node(state, out.values);
    return out;
  }
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(best.index)));
  out.values = round_once(factor, state, rng);
  out.unsat = best.unsat;
  return out;
}

// Per-clause true-literal counts for the assignment encoded by `code`.
struct GrayScan {
  explicit GrayScan(const Instance& inst) : inst(inst), true_count(static_cast<std::size_t>(inst.num_clauses()), 0) {}

  void reset(std::uint64_t code) {
    unsat = inst.empty_clauses();
    for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
      int c = 0;
      for (const auto& l : inst.clause(j).literals) {
        const bool is_true = ((code >> (l.var - 1)) & 1U) == 0;
        if ((l.sign > 0) == is_true) ++c;
      }
      true_count[static_cast<std::size_t>(j)] = c;
      if (c == 0) ++unsat;
    }
    this->code = code;
  }

  void flip(Var v) {
    const bool was_true = ((code >> (v - 1)) & 1U) == 0;
    code ^= std::uint64_t{1} << (v - 1);
    for (const auto& occ : inst.occurrences(v)) {
      auto& c = true_count[static_cast<std::size_t>(occ.clause)];
      const bool lit_was_true = (occ.sign > 0) == was_true;
      if (lit_was_true) {
        if (--c == 0) ++unsat;
      } else {
        if (c++ == 0) --unsat;
      }
    }
  }

  const Instance& inst;
  std::vector<int> true_count;
  std::uint64_t code = 0;
  int unsat = 0;
};

GrayMinimum scan_range(const Instance& inst, std::uint64_t begin, std::uint64_t end) {
  GrayScan scan(inst);
  scan.reset(gray_code(begin));
  GrayMinimum best{scan.unsat, begin};
  for (std::uint64_t t = begin + 1; t < end; ++t) {
    scan.flip(static_cast<Var>(std::countr_zero(t)) + 1);
    if (scan.unsat < best.min_unsat) best = {scan.unsat, t};
  }
  return best;
}

}  // namespace

namespace serial {

void column_duals(const NodeState& state, const Factor& factor, const ZCache& zcache,
                  std::span<double> lambda) {
  std::vector<double> g(static_cast<std::size_t>(factor.rank()));
  lambda[0] = truth_column_dual(state, factor, zcache, g);
  for (Var v = 1; v <= state.num_vars(); ++v) {
    lambda[static_cast<std::size_t>(v)] = state.is_free(v) ? free_column_dual(state, factor, zcache, v, g) : 0.0;
  }
}

Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed) {
  Trial best;
  for (int t = 0; t < budget; ++t) {
    const Trial trial = run_trial(factor, state, seed, t);
    if (better(trial, best)) best = trial;
  }
  return finish(factor, state, seed, best);
}

GrayMinimum gray_minimum(const Instance& instance) {
  return scan_range(instance, 0, std::uint64_t{1} << instance.num_vars());
}

}  // namespace serial

namespace omp {

void column_duals(const NodeState& state, const Factor& factor, const ZCache& zcache,
                  std::span<double> lambda) {
  const int n = state.num_vars();
  const std::size_t work = state.instance().nnz() * static_cast<std::size_t>(factor.rank());
  {
    std::vector<double> g(static_cast<std::size_t>(factor.rank()));
    lambda[0] = truth_column_dual(state, factor, zcache, g);
  }
#pragma omp parallel if (work >= kParallelWork)
  {
    std::vector<double> g(static_cast<std::size_t>(factor.rank()));
#pragma omp for schedule(static)
    for (Var v = 1; v <= n; ++v) {
      lambda[static_cast<std::size_t>(v)] = state.is_free(v) ? free_column_dual(state, factor, zcache, v, g) : 0.0;
    }
  }
}

Rounding best_rounding(const Factor& factor, const NodeState& state, int budget, std::uint64_t seed) {
  const std::size_t work = static_cast<std::size_t>(budget) *
                           (state.instance().nnz() + static_cast<std::size_t>(state.num_vars() * factor.rank()));
  Trial best;
#pragma omp parallel if (work >= kParallelWork)
  {
    Trial local;
#pragma omp for schedule(static) nowait
    for (int t = 0; t < budget; ++t) {
      const Trial trial = run_trial(factor, state, seed, t);
      if (better(trial, local)) local = trial;
    }
#pragma omp critical(mixsat_best_rounding)
    if (better(local, best)) best = local;
  }
  return finish(factor, state, seed, best);
}

GrayMinimum gray_minimum(const Instance& instance) {
  const std::uint64_t total = std::uint64_t{1} << instance.num_vars();
  const std::size_t work = static_cast<std::size_t>(total) * 4;
  GrayMinimum best{INT_MAX, 0};
#pragma omp parallel if (work >= kParallelWork)
  {
    const auto threads = static_cast<std::uint64_t>(omp_get_num_threads());
    const std::uint64_t chunks = std::min<std::uint64_t>(total, threads * 4);
    GrayMinimum local{INT_MAX, 0};
#pragma omp for schedule(dynamic) nowait
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      const std::uint64_t begin = total * static_cast<std::uint64_t>(c) / chunks;
      const std::uint64_t end = total * static_cast<std::uint64_t>(c + 1) / chunks;
      if (begin == end) continue;
      const GrayMinimum part = scan_range(instance, begin, end);
      if (part.min_unsat < local.min_unsat || (part.min_unsat == local.min_unsat && part.index < local.index)) {
        local = part;
      }
    }
#pragma omp critical(mixsat_gray_minimum)
    if (local.min_unsat < best.min_unsat || (local.min_unsat == best.min_unsat && local.index < best.index)) {
      best = local;
    }
  }
  return best;
}

}  // namespace omp

}  // namespace mixsat::kernels
