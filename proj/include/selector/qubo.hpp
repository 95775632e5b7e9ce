#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "selector/bits.hpp"

namespace selector {

/// Canonical quadratic binary model: energy(x) = sum_{i<=j} coeff(i,j) x_i x_j
/// + offset. Linear terms live on the diagonal (x_i^2 = x_i); the strict lower
/// triangle is zero by construction.
class QuboModel {
 public:
  explicit QuboModel(std::size_t num_vars);

  std::size_t num_vars() const noexcept { return n_; }
  double offset() const noexcept { return offset_; }
  void set_offset(double v) noexcept { offset_ = v; }
  void add_offset(double v) noexcept { offset_ += v; }

  /// Accumulates into the canonical (upper-triangle) slot; (i, j) and (j, i)
  /// address the same coefficient.
  void add_coeff(std::size_t i, std::size_t j, double v);
  double coeff(std::size_t i, std::size_t j) const;

  double energy(const Bits& x) const;

  const std::vector<std::string>& var_names() const noexcept { return var_names_; }
  void set_var_name(std::size_t i, std::string name) { var_names_[i] = std::move(name); }

  /// Dense symmetric coupling view for solvers: couple(i,j) = coeff(min,max)
  /// for i != j, 0 on the diagonal. Linear terms via linear(i).
  double couple(std::size_t i, std::size_t j) const {
    return i == j ? 0.0 : coeffs_[(i < j ? i : j) * n_ + (i < j ? j : i)];
  }
  double linear(std::size_t i) const { return coeffs_[i * n_ + i]; }

  /// Sum of |coefficient| over all linear and pair terms (offset excluded).
  double coefficient_l1_norm() const;

  std::string to_json_string() const;
  static QuboModel from_json_string(const std::string& text);

  /// Plain coordinate text: one "i j coeff" line per nonzero upper-triangle
  /// term, offset and size carried in comment lines.
  void write_coordinate(std::ostream& out) const;
  static QuboModel read_coordinate(std::istream& in);

 private:
  std::size_t n_;
  std::vector<double> coeffs_;  // row-major n x n, lower triangle always 0
  double offset_ = 0.0;
  std::vector<std::string> var_names_;
};

}  // namespace selector
