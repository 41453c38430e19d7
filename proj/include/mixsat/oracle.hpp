#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "mixsat/instance.hpp"
#include "mixsat/node_state.hpp"
#include "mixsat/sdp.hpp"

// Exact reference solvers and dense re-computations used as ground truth by
// the test suites. Not used on the production solve path.
namespace mixsat::oracle {

inline constexpr int kMaxBruteForceVars = 26;
inline constexpr int kMaxDenseVars = 200;

struct BruteForceResult {
  int min_unsat = 0;
  std::vector<std::int8_t> witness;  // values[1..n]; first optimum in Gray-code order
};

// Gray-code enumeration starting from all-TRUE; O(occurrences) per flip.
// Throws std::invalid_argument above kMaxBruteForceVars.
BruteForceResult brute_force(const Instance& instance);

// Independent second implementation: evaluates every assignment from scratch
// in binary-counter order.
BruteForceResult brute_force_naive(const Instance& instance);

// Minimum unsat over all completions of a partial assignment
// (values[v] in {-1, 0, +1}, 0 = free).
int min_unsat_completion(const Instance& instance, std::span<const std::int8_t> partial);

// Zero-diagonal cost matrix over columns 0..n for an explicit clause set.
// s0_j is recomputed from `partial` by folding every assigned literal of the
// clause into the truth coefficient; assigned columns are left zero.
Eigen::MatrixXd dense_cost_matrix(const Instance& instance, std::span<const ClauseId> clauses,
                                  std::span<const std::int8_t> partial);

// Constant part of the objective for the same clause set and assignment:
// base + sum_j (s0_j^2 + free_j - (n_j - 1)^2) / (4 n_j).
double dense_constant(const Instance& instance, std::span<const ClauseId> clauses,
                      std::span<const std::int8_t> partial, int base);

struct DenseCheck {
  Eigen::MatrixXd cost;   // C' over columns 0..n (drop view: active clauses only)
  double min_eig = 0.0;   // of C' + D_lambda restricted to column 0 and free columns
  double objective = 0.0; // dense <C', V^T V> + constant
  double dual_bound = 0.0;
};

// Dense audit of a node: throws std::invalid_argument above kMaxDenseVars.
DenseCheck dense_sdp_check(const NodeState& state, const Factor& factor, const DualCert& cert);

// Minimum eigenvalue of cost + diag(lambda) restricted to `columns`.
double min_eigenvalue(const Eigen::MatrixXd& cost, std::span<const double> lambda,
                      std::span<const int> columns);

std::vector<std::int8_t> partial_from_state(const NodeState& state);
std::vector<ClauseId> active_clauses(const NodeState& state);

}  // namespace mixsat::oracle
