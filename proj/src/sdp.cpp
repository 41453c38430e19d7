#include "mixsat/sdp.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mixsat/kernels.hpp"
#include "mixsat/rng.hpp"

namespace mixsat {

namespace {

double clause_weight(int clause_len) { return 1.0 / (4.0 * clause_len); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) s += a[r] * b[r];
  return s;
}

}  // namespace

int default_rank(int num_vars) {
  if (num_vars < 1) throw std::invalid_argument("default_rank: need at least one variable");
  const long long target = 2LL * (num_vars + 1);
  auto root = static_cast<long long>(std::sqrt(static_cast<double>(target)));
  while (root * root > target) --root;
  while (root * root < target) ++root;
  return static_cast<int>(root) + 1;
}

Factor init_factor(int num_vars, int rank, std::uint64_t seed) {
  if (rank < 2) throw std::invalid_argument("init_factor: rank must be at least 2");
  Factor factor(rank, num_vars);
  factor.column(0)[0] = 1.0;
  Rng rng(seed);
  for (int i = 1; i <= num_vars; ++i) sample_sphere(rng, factor.column(i));
  return factor;
}

double clause_loss(std::span<const double> z, int clause_len) {
  const double excess = clause_len - 1.0;
  return (dot(z, z) - excess * excess) * clause_weight(clause_len);
}

void ZCache::rebuild(const NodeState& state, const Factor& factor) {
  const Instance& inst = state.instance();
  rank_ = factor.rank();
  data_.assign(static_cast<std::size_t>(inst.num_clauses()) * static_cast<std::size_t>(rank_), 0.0);
  const auto truth = factor.column(0);
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) != ClauseStatus::Active) continue;
    auto zj = z(j);
    const double s0 = state.s0(j);
    for (int r = 0; r < rank_; ++r) zj[static_cast<std::size_t>(r)] = s0 * truth[static_cast<std::size_t>(r)];
    for (const auto& l : inst.clause(j).literals) {
      if (!state.is_free(l.var)) continue;
      const auto v = factor.column(l.var);
      for (int r = 0; r < rank_; ++r) zj[static_cast<std::size_t>(r)] += l.sign * v[static_cast<std::size_t>(r)];
    }
  }
}

double DualCert::lambda_sum() const {
  return std::accumulate(lambda.begin(), lambda.end(), 0.0);
}

double objective(const NodeState& state, const ZCache& zcache) {
  const Instance& inst = state.instance();
  double total = 0.0;
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) == ClauseStatus::Active) total += clause_loss(zcache.z(j), inst.clause(j).size());
  }
  return state.base_unsat() + total;
}

double mixing_sweep(const NodeState& state, Factor& factor, ZCache& zcache,
                    std::span<const Var> order) {
  const Instance& inst = state.instance();
  const auto k = static_cast<std::size_t>(factor.rank());
  std::vector<double> g(k);
  for (const Var i : order) {
    if (!state.is_free(i)) continue;
    const auto live = state.watched().live(i);
    if (live.empty()) continue;
    auto vi = factor.column(i);
    std::fill(g.begin(), g.end(), 0.0);
    for (const auto& w : live) {
      auto zj = zcache.z(w.clause);
      const double s = w.sign;
      const double coeff = s * clause_weight(inst.clause(w.clause).size());
      for (std::size_t r = 0; r < k; ++r) {
        zj[r] -= s * vi[r];
        g[r] += coeff * zj[r];
      }
    }
    const double norm = std::sqrt(dot(g, g));
    // Any unit vector minimizes a zero target; keep the current one.
    if (norm >= 1e-12) {
      for (std::size_t r = 0; r < k; ++r) vi[r] = -g[r] / norm;
    }
    for (const auto& w : live) {
      auto zj = zcache.z(w.clause);
      const double s = w.sign;
      for (std::size_t r = 0; r < k; ++r) zj[r] += s * vi[r];
    }
  }
  return objective(state, zcache);
}

double estimate_gap(double prev_decrease, double decrease) {
  if (!(decrease > 0.0)) return 0.0;
  double rho = prev_decrease > 0.0 ? decrease / prev_decrease : 0.999;
  rho = std::clamp(rho, 0.0, 0.999);
  return decrease * rho / (1.0 - rho);
}

SdpResult solve(const NodeState& state, Factor& factor, ZCache& zcache, const SdpConfig& config,
                std::span<const Var> order) {
  if (!(config.eps > 0.0)) throw std::invalid_argument("solve: eps must be positive");
  SdpResult result;
  double f_prev = objective(state, zcache);
  result.objective_unsat = f_prev;

  if (state.active_count() > 0) {
    result.converged = false;
    double prev_decrease = -1.0;
    for (int t = 1; t <= config.max_sweeps; ++t) {
      const double f = mixing_sweep(state, factor, zcache, order);
      result.sweeps_used = t;
      result.objective_unsat = f;
      if (config.record_trace) result.trace.push_back(f);
      const double decrease = f_prev - f;
      if (t == 1) {
        result.est_gap = decrease > 0.0 ? estimate_gap(-1.0, decrease) : 0.0;
      } else {
        result.est_gap = estimate_gap(prev_decrease, decrease);
      }
      if ((t >= 2 || !(decrease > 1e-15)) && result.est_gap <= config.eps) {
        result.converged = true;
        break;
      }
      prev_decrease = decrease;
      f_prev = f;
      if (config.deadline && Clock::now() >= *config.deadline) break;
    }
  }

  result.dual = dual_from_primal(state, factor, zcache);
  if (config.certify) certify_dual(state, result.dual, config.certify_max_columns);
  return result;
}

DualCert dual_from_primal(const NodeState& state, const Factor& factor, const ZCache& zcache) {
  const Instance& inst = state.instance();
  DualCert cert;
  cert.lambda.assign(static_cast<std::size_t>(inst.num_vars()) + 1, 0.0);
  kernels::omp::column_duals(state, factor, zcache, cert.lambda);

  double offset = state.base_unsat();
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) != ClauseStatus::Active) continue;
    const int len = inst.clause(j).size();
    const int s0 = state.s0(j);
    const int free_lits = len + 1 + s0;  // active: s0 = -1 - (#false literals)
    const double excess = len - 1.0;
    offset += (static_cast<double>(s0) * s0 + free_lits - excess * excess) * clause_weight(len);
  }
  cert.const_offset = offset;
  cert.certified = state.active_count() == 0;
  return cert;
}

std::vector<int> coupled_columns(const NodeState& state) {
  std::vector<int> cols{0};
  for (Var v = 1; v <= state.num_vars(); ++v) {
    if (state.is_free(v) && !state.watched().live(v).empty()) cols.push_back(v);
  }
  return cols;
}

void certify_dual(const NodeState& state, DualCert& cert, int max_columns) {
  const Instance& inst = state.instance();
  const std::vector<int> cols = coupled_columns(state);
  if (static_cast<int>(cols.size()) > max_columns) {
    cert.certified = false;
    return;
  }
  std::vector<int> index(static_cast<std::size_t>(inst.num_vars()) + 1, -1);
  for (std::size_t p = 0; p < cols.size(); ++p) index[static_cast<std::size_t>(cols[p])] = static_cast<int>(p);

  const auto dim = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<std::pair<int, double>> entries;
  for (ClauseId j = 0; j < inst.num_clauses(); ++j) {
    if (state.status(j) != ClauseStatus::Active) continue;
    const double w = clause_weight(inst.clause(j).size());
    entries.clear();
    entries.emplace_back(0, static_cast<double>(state.s0(j)));
    for (const auto& l : inst.clause(j).literals) {
      if (state.is_free(l.var)) entries.emplace_back(index[static_cast<std::size_t>(l.var)], l.sign);
    }
    for (std::size_t a = 0; a < entries.size(); ++a) {
      for (std::size_t b = a + 1; b < entries.size(); ++b) {
        const double c = entries[a].second * entries[b].second * w;
        m(entries[a].first, entries[b].first) += c;
        m(entries[b].first, entries[a].first) += c;
      }
    }
  }
  for (Eigen::Index p = 0; p < dim; ++p) m(p, p) = cert.lambda[static_cast<std::size_t>(cols[static_cast<std::size_t>(p)])];

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues()(0);
  if (min_eig < 0.0) {
    const double sigma = -min_eig * (1.0 + 1e-9) + 1e-12;
    for (int c : cols) cert.lambda[static_cast<std::size_t>(c)] += sigma;
    cert.shift = sigma;
  }
  cert.certified = true;
}

}  // namespace mixsat
