#include "selector/objective.hpp"

#include <cmath>
#include <string>

#include "selector/errors.hpp"

namespace selector {

SelectorProblem::SelectorProblem(DistanceMatrix distance, std::size_t k_, double penalty)
    : d(std::move(distance)), k(k_), penalty_a(penalty) {
  require(k >= 1 && k <= d.size(), ErrorClass::InvalidArgument,
          "k must be in [1, n]; got k=" + std::to_string(k) + ", n=" + std::to_string(d.size()));
  require(std::isfinite(penalty_a) && penalty_a >= 0.0, ErrorClass::InvalidArgument,
          "penalty A must be finite and >= 0");
}

WeightedConfig::WeightedConfig(std::size_t n_d_, double w_min_, double w_max_, double penalty_b_,
                               double budget_w_)
    : n_d(n_d_), w_min(w_min_), w_max(w_max_), penalty_b(penalty_b_), budget_w(budget_w_) {
  require(n_d >= 1, ErrorClass::InvalidArgument, "n_D must be >= 1");
  require(w_min < w_max, ErrorClass::InvalidArgument, "w_min must be < w_max");
  require(std::isfinite(penalty_b) && penalty_b >= 0.0, ErrorClass::InvalidArgument,
          "penalty B must be finite and >= 0");
  require(std::isfinite(budget_w), ErrorClass::InvalidArgument, "budget W must be finite");
}

double evaluate_cost(const SelectorProblem& problem, const Bits& x) {
  const std::size_t n = problem.size();
  require(x.size() == n, ErrorClass::InvalidArgument,
          "bit vector length " + std::to_string(x.size()) + " != n " + std::to_string(n));
  double pair_sum = 0.0;  // x d x^T over the upper triangle, doubled below
  double row_sum = 0.0;   // x d 1^T
  std::size_t weight = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    ++weight;
    row_sum += problem.d.row_sum(i);
    auto di = problem.d.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (x[j]) pair_sum += di[j];
    }
  }
  const double quad = 2.0 * pair_sum;  // symmetric d, zero diagonal
  const double deviation = static_cast<double>(weight) - static_cast<double>(problem.k);
  return -quad / (2.0 * static_cast<double>(problem.k)) +
         row_sum / static_cast<double>(n) +
         problem.penalty_a * deviation * deviation;
}

QuboModel compile_qubo(const SelectorProblem& problem) {
  const std::size_t n = problem.size();
  const double k = static_cast<double>(problem.k);
  const double a = problem.penalty_a;
  QuboModel model(n);
  // (sum x - k)^2  =  sum_i (1 - 2k) x_i  +  2 sum_{i<j} x_i x_j  +  k^2
  for (std::size_t i = 0; i < n; ++i) {
    model.add_coeff(i, i, problem.d.row_sum(i) / static_cast<double>(n) + a * (1.0 - 2.0 * k));
    auto di = problem.d.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      model.add_coeff(i, j, -di[j] / k + 2.0 * a);
    }
  }
  model.add_offset(a * k * k);
  return model;
}

namespace {

/// Place value of weight bit j (0-based, least significant first).
double bit_place_value(std::size_t j, std::size_t n_d) {
  return std::ldexp(1.0, static_cast<int>(j)) / (std::ldexp(1.0, static_cast<int>(n_d)) - 1.0);
}

}  // namespace

double expand_weights(const WeightedConfig& config, const Bits& weight_bits) {
  require(weight_bits.size() == config.n_d, ErrorClass::InvalidArgument,
          "weight-bit row length " + std::to_string(weight_bits.size()) + " != n_D " +
              std::to_string(config.n_d));
  // Integer numerator keeps the all-ones case exactly (2^n_D - 1)/(2^n_D - 1).
  double numerator = 0.0;
  for (std::size_t j = 0; j < config.n_d; ++j) {
    if (weight_bits[j]) numerator += std::ldexp(1.0, static_cast<int>(j));
  }
  const double denom = std::ldexp(1.0, static_cast<int>(config.n_d)) - 1.0;
  return config.w_min + (config.w_max - config.w_min) * (numerator / denom);
}

double evaluate_weighted_cost(const SelectorProblem& problem, const WeightedConfig& config,
                              const Bits& x, const Bits& weight_bits) {
  const std::size_t n = problem.size();
  require(x.size() == n, ErrorClass::InvalidArgument, "selection bit length != n");
  require(weight_bits.size() == n * config.n_d, ErrorClass::InvalidArgument,
          "weight-bit matrix must be n * n_D bits");
  std::vector<double> chi(n, 0.0);
  std::size_t weight = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    ++weight;
    Bits row(weight_bits.begin() + static_cast<std::ptrdiff_t>(i * config.n_d),
             weight_bits.begin() + static_cast<std::ptrdiff_t>((i + 1) * config.n_d));
    chi[i] = expand_weights(config, row);
  }
  double quad = 0.0, lin = 0.0, chi_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (chi[i] == 0.0 && !x[i]) continue;
    lin += chi[i] * problem.d.row_sum(i);
    chi_total += chi[i];
    auto di = problem.d.row(i);
    for (std::size_t j = i + 1; j < n; ++j) quad += 2.0 * chi[i] * chi[j] * di[j];
  }
  const double dev_k = static_cast<double>(weight) - static_cast<double>(problem.k);
  const double dev_w = chi_total - config.budget_w;
  return -quad / (2.0 * static_cast<double>(problem.k)) + lin / static_cast<double>(n) +
         problem.penalty_a * dev_k * dev_k + config.penalty_b * dev_w * dev_w;
}

WeightedLayout weighted_layout(const SelectorProblem& problem, const WeightedConfig& config) {
  return WeightedLayout{problem.size(), config.n_d};
}

QuboModel compile_weighted_qubo(const SelectorProblem& problem, const WeightedConfig& config) {
  const std::size_t n = problem.size();
  const std::size_t n_d = config.n_d;
  const WeightedLayout layout = weighted_layout(problem, config);
  QuboModel model(layout.num_vars());

  for (std::size_t i = 0; i < n; ++i) {
    model.set_var_name(layout.x_index(i), "x_" + std::to_string(i));
    for (std::size_t j = 0; j < n_d; ++j) {
      model.set_var_name(layout.weight_index(i, j),
                         "X_" + std::to_string(i) + "_" + std::to_string(j));
      model.set_var_name(layout.aux_index(i, j),
                         "y_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }

  // chi_i = w_min * x_i + s * sum_j c_j * y_{i,j}, with y_{i,j} = x_i X_{i,j}.
  // Each chi_i has 1 + n_D generalized "digits"; record them once.
  struct Digit {
    std::size_t var;
    double coeff;
  };
  std::vector<std::vector<Digit>> chi(n);
  const double s = config.w_max - config.w_min;
  for (std::size_t i = 0; i < n; ++i) {
    if (config.w_min != 0.0) chi[i].push_back({layout.x_index(i), config.w_min});
    for (std::size_t j = 0; j < n_d; ++j) {
      chi[i].push_back({layout.aux_index(i, j), s * bit_place_value(j, n_d)});
    }
  }

  const double k = static_cast<double>(problem.k);
  const double a = problem.penalty_a;
  const double b = config.penalty_b;
  const double w = config.budget_w;
  const double nd = static_cast<double>(n);

  // -(1/2k) chi d chi^T: cross products of distinct points' digits.
  for (std::size_t p = 0; p < n; ++p) {
    auto dp = problem.d.row(p);
    for (std::size_t q = p + 1; q < n; ++q) {
      const double scale = -dp[q] / k;  // both (p,q) and (q,p) contributions
      if (scale == 0.0) continue;
      for (const auto& u : chi[p])
        for (const auto& v : chi[q]) model.add_coeff(u.var, v.var, scale * u.coeff * v.coeff);
    }
  }

  // +(1/n) chi d 1^T: linear in each digit.
  for (std::size_t p = 0; p < n; ++p) {
    const double rs = problem.d.row_sum(p) / nd;
    for (const auto& u : chi[p]) model.add_coeff(u.var, u.var, rs * u.coeff);
  }

  // A (sum x - k)^2 on the selection bits.
  for (std::size_t i = 0; i < n; ++i) {
    model.add_coeff(layout.x_index(i), layout.x_index(i), a * (1.0 - 2.0 * k));
    for (std::size_t j = i + 1; j < n; ++j)
      model.add_coeff(layout.x_index(i), layout.x_index(j), 2.0 * a);
  }
  model.add_offset(a * k * k);

  // B (sum chi - W)^2 = B [ sum chi_p^2 + 2 sum_{p<q} chi_p chi_q
  //                         - 2W sum chi_p + W^2 ].
  if (b != 0.0) {
    for (std::size_t p = 0; p < n; ++p) {
      // chi_p^2: squares of binary digits collapse to the digit itself.
      for (std::size_t u = 0; u < chi[p].size(); ++u) {
        const auto& du = chi[p][u];
        model.add_coeff(du.var, du.var, b * du.coeff * du.coeff);
        for (std::size_t v = u + 1; v < chi[p].size(); ++v) {
          const auto& dv = chi[p][v];
          model.add_coeff(du.var, dv.var, 2.0 * b * du.coeff * dv.coeff);
        }
      }
      for (std::size_t q = p + 1; q < n; ++q) {
        for (const auto& u : chi[p])
          for (const auto& v : chi[q]) model.add_coeff(u.var, v.var, 2.0 * b * u.coeff * v.coeff);
      }
      for (const auto& u : chi[p]) model.add_coeff(u.var, u.var, -2.0 * b * w * u.coeff);
    }
    model.add_offset(b * w * w);
  }

  // Product substitution y = x * X, penalized so that any inconsistent
  // auxiliary costs more than the whole objective can ever repay.
  const double m = 1.0 + model.coefficient_l1_norm();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n_d; ++j) {
      const std::size_t xi = layout.x_index(i);
      const std::size_t Xij = layout.weight_index(i, j);
      const std::size_t yij = layout.aux_index(i, j);
      model.add_coeff(yij, yij, 3.0 * m);
      model.add_coeff(xi, Xij, m);
      model.add_coeff(xi, yij, -2.0 * m);
      model.add_coeff(Xij, yij, -2.0 * m);
    }
  }
  return model;
}

}  // namespace selector
