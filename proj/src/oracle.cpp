#include "mixsat/oracle.hpp"

#include <Eigen/Eigenvalues>

#include <climits>
#include <stdexcept>

#include "mixsat/kernels.hpp"

namespace mixsat::oracle {

namespace {

void check_cap(const Instance& instance) {
  if (instance.num_vars() > kMaxBruteForceVars) {
    throw std::invalid_argument("brute_force: " + std::to_string(instance.num_vars()) +
                                " variables exceeds the cap of " + std::to_string(kMaxBruteForceVars));
  }
}

std::vector<std::int8_t> decode(std::uint64_t code, int n) {
  std::vector<std::int8_t> values(static_cast<std::size_t>(n) + 1, 1);
  for (int v = 1; v <= n; ++v) values[static_cast<std::size_t>(v)] = ((code >> (v - 1)) & 1U) ? -1 : 1;
  return values;
}

}  // namespace

BruteForceResult brute_force(const Instance& instance) {
  check_cap(instance);
  const auto best = kernels::omp::gray_minimum(instance);
  return {best.min_unsat, decode(kernels::gray_code(best.index), instance.num_vars())};
}

BruteForceResult brute_force_naive(const Instance& instance) {
  check_cap(instance);
  const int n = instance.num_vars();
  BruteForceResult best{INT_MAX, {}};
  std::vector<std::int8_t> values(static_cast<std::size_t>(n) + 1, 1);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (int v = 1; v <= n; ++v) values[static_cast<std::size_t>(v)] = ((code >> (v - 1)) & 1U) ? -1 : 1;
    const int unsat = evaluate(instance, values);
    if (unsat < best.min_unsat) {
      best.min_unsat = unsat;
      best.witness = values;
    }
  }
  return best;
}

int min_unsat_completion(const Instance& instance, std::span<const std::int8_t> partial) {
  std::vector<Var> free;
  for (Var v = 1; v <= instance.num_vars(); ++v) {
    if (partial[static_cast<std::size_t>(v)] == 0) free.push_back(v);
  }
  if (free.size() > static_cast<std::size_t>(kMaxBruteForceVars)) {
    throw std::invalid_argument("min_unsat_completion: too many free variables");
  }
  // Restrict to the free variables and enumerate the reduced instance.
  std::vector<int> remap(static_cast<std::size_t>(instance.num_vars()) + 1, 0);
  for (std::size_t p = 0; p < free.size(); ++p) remap[static_cast<std::size_t>(free[p])] = static_cast<int>(p) + 1;
  std::vector<std::vector<int>> reduced;
  for (const auto& clause : instance.clauses()) {
    std::vector<int> lits;
    bool satisfied = false;
    for (const auto& l : clause.literals) {
      const auto val = partial[static_cast<std::size_t>(l.var)];
      if (val == 0) {
        lits.push_back(l.sign * remap[static_cast<std::size_t>(l.var)]);
      } else if (val * l.sign > 0) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) reduced.push_back(std::move(lits));
  }
  const auto sub = Instance::from_dimacs_clauses(static_cast<int>(free.size()), reduced);
  return brute_force(sub).min_unsat + instance.empty_clauses();
}

Eigen::MatrixXd dense_cost_matrix(const Instance& instance, std::span<const ClauseId> clauses,
                                  std::span<const std::int8_t> partial) {
  const Eigen::Index dim = instance.num_vars() + 1;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(clauses.size()), dim);
  Eigen::VectorXd inv_d(static_cast<Eigen::Index>(clauses.size()));
  for (std::size_t r = 0; r < clauses.size(); ++r) {
    const Clause& clause = instance.clause(clauses[r]);
    double s0 = -1.0;
    for (const auto& l : clause.literals) {
      const auto val = partial[static_cast<std::size_t>(l.var)];
      if (val == 0) {
        s(static_cast<Eigen::Index>(r), l.var) = l.sign;
      } else {
        s0 += l.sign * val;
      }
    }
    s(static_cast<Eigen::Index>(r), 0) = s0;
    inv_d(static_cast<Eigen::Index>(r)) = 1.0 / (4.0 * clause.size());
  }
  Eigen::MatrixXd c = s.transpose() * inv_d.asDiagonal() * s;
  c.diagonal().setZero();
  return c;
}

double dense_constant(const Instance& instance, std::span<const ClauseId> clauses,
                      std::span<const std::int8_t> partial, int base) {
  double total = base;
  for (const ClauseId j : clauses) {
    const Clause& clause = instance.clause(j);
    double s0 = -1.0;
    int free_lits = 0;
    for (const auto& l : clause.literals) {
      const auto val = partial[static_cast<std::size_t>(l.var)];
      if (val == 0) {
        ++free_lits;
      } else {
        s0 += l.sign * val;
      }
    }
    const double excess = clause.size() - 1.0;
    total += (s0 * s0 + free_lits - excess * excess) / (4.0 * clause.size());
  }
  return total;
}

double min_eigenvalue(const Eigen::MatrixXd& cost, std::span<const double> lambda,
                      std::span<const int> columns) {
  const auto dim = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      m(a, b) = cost(columns[static_cast<std::size_t>(a)], columns[static_cast<std::size_t>(b)]);
    }
    m(a, a) += lambda[static_cast<std::size_t>(columns[static_cast<std::size_t>(a)])];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

std::vector<std::int8_t> partial_from_state(const NodeState& state) {
  std::vector<std::int8_t> partial(static_cast<std::size_t>(state.num_vars()) + 1, 0);
  for (Var v = 1; v <= state.num_vars(); ++v) partial[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(to_int(state.value(v)));
  return partial;
}

std::vector<ClauseId> active_clauses(const NodeState& state) {
  std::vector<ClauseId> out;
  for (ClauseId j = 0; j < state.instance().num_clauses(); ++j) {
    if (state.status(j) == ClauseStatus::Active) out.push_back(j);
  }
  return out;
}

DenseCheck dense_sdp_check(const NodeState& state, const Factor& factor, const DualCert& cert) {
  const Instance& inst = state.instance();
  if (inst.num_vars() > kMaxDenseVars) {
    throw std::invalid_argument("dense_sdp_check: too many variables");
  }
  const auto partial = partial_from_state(state);
  const auto clauses = active_clauses(state);

  DenseCheck out;
  out.cost = dense_cost_matrix(inst, clauses, partial);

  const Eigen::Index dim = inst.num_vars() + 1;
  Eigen::MatrixXd v(factor.rank(), dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto col = factor.column(static_cast<int>(i));
    for (int r = 0; r < factor.rank(); ++r) v(r, i) = col[static_cast<std::size_t>(r)];
  }
  std::vector<int> columns{0};
  for (Var i = 1; i <= inst.num_vars(); ++i) {
    if (partial[static_cast<std::size_t>(i)] == 0) columns.push_back(i);
  }
  // Assigned columns carry no coefficients; mask them out of the Gram matrix.
  for (Var i = 1; i <= inst.num_vars(); ++i) {
    if (partial[static_cast<std::size_t>(i)] != 0) v.col(i).setZero();
  }
  const Eigen::MatrixXd gram = v.transpose() * v;
  out.objective = (out.cost.cwiseProduct(gram)).sum() + dense_constant(inst, clauses, partial, state.base_unsat());
  out.min_eig = min_eigenvalue(out.cost, cert.lambda, columns);
  out.dual_bound = cert.dual_bound();
  return out;
}

}  // namespace mixsat::oracle
