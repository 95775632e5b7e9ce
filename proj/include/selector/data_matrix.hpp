#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "selector/bits.hpp"

namespace selector {

/// Immutable n x m matrix of data points (one point per row) with optional
/// distinct per-row labels. All modules share this as the dataset type.
class DataMatrix {
 public:
  DataMatrix(std::vector<std::vector<double>> rows,
             std::optional<std::vector<std::string>> labels = std::nullopt);

  std::size_t num_rows() const noexcept { return n_; }
  std::size_t num_cols() const noexcept { return m_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * m_, m_};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::string>& labels() const { return *labels_; }
  const std::string& label(std::size_t i) const { return (*labels_)[i]; }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<double> values_;  // row-major
  std::optional<std::vector<std::string>> labels_;
};

/// Symmetric nonnegative matrix with zero diagonal. Construction mirrors one
/// triangle, so entries(i,j) == entries(j,i) is an exact equality.
class DistanceMatrix {
 public:
  /// Builds from a pairwise function evaluated on the upper triangle only.
  template <typename PairFn>  // double(std::size_t i, std::size_t j), i < j
  static DistanceMatrix from_upper(std::size_t n, PairFn&& fn) {
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d.set_pair(i, j, fn(i, j));
      }
    }
    d.validate();
    return d;
  }

  /// Builds from a dense matrix; reads the upper triangle and mirrors it.
  /// The supplied lower triangle must match within 0 (exactly) or it is
  /// simply ignored: symmetry is by construction, not by check.
  static DistanceMatrix from_dense(const std::vector<std::vector<double>>& entries);

  std::size_t size() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }

  /// Sum of row i (distance from point i to all other points).
  double row_sum(std::size_t i) const;

 private:
  explicit DistanceMatrix(std::size_t n) : n_(n), entries_(n * n, 0.0) {}
  void set_pair(std::size_t i, std::size_t j, double v) {
    entries_[i * n_ + j] = v;
    entries_[j * n_ + i] = v;
  }
  void validate() const;

  std::size_t n_;
  std::vector<double> entries_;
};

/// A chosen subset of row indices, kept sorted; convertible to/from the
/// equivalent bit vector (bit i <=> row i).
class Selection {
 public:
  static Selection from_bits(const Bits& bits);
  static Selection from_indices(std::size_t n, std::vector<std::size_t> indices);

  const std::vector<std::size_t>& chosen() const noexcept { return chosen_; }
  std::size_t universe_size() const noexcept { return n_; }
  std::size_t size() const noexcept { return chosen_.size(); }
  Bits bits() const;

 private:
  Selection(std::size_t n, std::vector<std::size_t> chosen)
      : n_(n), chosen_(std::move(chosen)) {}
  std::size_t n_ = 0;
  std::vector<std::size_t> chosen_;
};

}  // namespace selector
