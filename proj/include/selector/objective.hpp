#pragma once

#include <cstddef>
#include <vector>

#include "selector/data_matrix.hpp"
#include "selector/qubo.hpp"

namespace selector {

/// Representative-selection instance: pick k of n points under distance
/// structure d, with penalty weight A on the cardinality constraint
/// sum(x) = k.
///
/// The cost of a selection bit vector x is
///
///   cost(x) = -(1/2k) * x d x^T + (1/n) * x d 1^T + A * (sum_i x_i - k)^2
///
/// i.e. selected points should be far from each other (first term) while each
/// being centrally located, close to the rest of the dataset (second term).
struct SelectorProblem {
  DistanceMatrix d;
  std::size_t k = 1;
  double penalty_a = 2.0;

  SelectorProblem(DistanceMatrix distance, std::size_t k_, double penalty);
  std::size_t size() const noexcept { return d.size(); }
};

/// Discretized-weight extension: each selected point carries a weight encoded
/// with n_D bits on [w_min, w_max]; B penalizes deviation of the total weight
/// from the budget W.
struct WeightedConfig {
  std::size_t n_d = 1;   // bits per point, >= 1
  double w_min = 0.0;
  double w_max = 1.0;    // > w_min
  double penalty_b = 2.0;  // >= 0
  double budget_w = 1.0;

  WeightedConfig(std::size_t n_d_, double w_min_, double w_max_, double penalty_b_,
                 double budget_w_);
};

/// Direct evaluation of the selection cost at x; independent of any QUBO
/// compilation (the two paths cross-check each other in tests).
double evaluate_cost(const SelectorProblem& problem, const Bits& x);

/// Compiles the cost function into canonical QUBO form over exactly n
/// variables (no auxiliaries): energy(x) == evaluate_cost(x) for every x.
QuboModel compile_qubo(const SelectorProblem& problem);

/// Decodes one point's weight from its n_D bits (bit j has place value
/// 2^j / (2^n_D - 1), least significant first).
double expand_weights(const WeightedConfig& config, const Bits& weight_bits);

/// Direct evaluation of the weighted cost at (x, X) where X is the n x n_D
/// weight-bit matrix flattened row-major. chi_i = w_i * x_i is formed
/// directly; no quadratization involved.
double evaluate_weighted_cost(const SelectorProblem& problem, const WeightedConfig& config,
                              const Bits& x, const Bits& weight_bits);

/// Variable layout of the compiled weighted model.
struct WeightedLayout {
  std::size_t n = 0;    // selection bits x_i at [0, n)
  std::size_t n_d = 0;  // weight bits X_{i,j} at n + i*n_d + j
  std::size_t num_vars() const { return n + 2 * n * n_d; }
  std::size_t x_index(std::size_t i) const { return i; }
  std::size_t weight_index(std::size_t i, std::size_t j) const { return n + i * n_d + j; }
  /// auxiliary y_{i,j} representing the product x_i * X_{i,j}
  std::size_t aux_index(std::size_t i, std::size_t j) const {
    return n + n * n_d + i * n_d + j;
  }
};

/// Compiles the weighted cost to a QUBO over n + n*n_D + n*n_D variables.
/// Products x_i * X_{i,j} are replaced by auxiliaries y_{i,j} with the penalty
/// M * (3y + xX - 2xy - 2Xy), zero iff y = xX; M exceeds the total coefficient
/// mass of the objective so inconsistent auxiliaries never pay off. For every
/// (x, X), minimizing the energy over the auxiliaries reproduces
/// evaluate_weighted_cost(x, X).
QuboModel compile_weighted_qubo(const SelectorProblem& problem, const WeightedConfig& config);

WeightedLayout weighted_layout(const SelectorProblem& problem, const WeightedConfig& config);

}  // namespace selector
