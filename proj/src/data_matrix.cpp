#include "selector/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "selector/errors.hpp"

namespace selector {

DataMatrix::DataMatrix(std::vector<std::vector<double>> rows,
                       std::optional<std::vector<std::string>> labels) {
  require(rows.size() >= 2, ErrorClass::InvalidArgument,
          "a data matrix needs at least 2 rows, got " + std::to_string(rows.size()));
  n_ = rows.size();
  m_ = rows.front().size();
  require(m_ >= 1, ErrorClass::InvalidArgument, "rows must have at least one column");
  for (std::size_t i = 0; i < n_; ++i) {
    require(rows[i].size() == m_, ErrorClass::InvalidArgument,
            "ragged rows: row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                " columns, expected " + std::to_string(m_));
  }
  if (labels) {
    require(labels->size() == n_, ErrorClass::InvalidArgument,
            "label count " + std::to_string(labels->size()) + " != row count " +
                std::to_string(n_));
    std::unordered_set<std::string> seen;
    for (const auto& l : *labels) {
      require(seen.insert(l).second, ErrorClass::InvalidArgument, "duplicate label '" + l + "'");
    }
  }
  values_.reserve(n_ * m_);
  for (const auto& r : rows) values_.insert(values_.end(), r.begin(), r.end());
  labels_ = std::move(labels);
}

DistanceMatrix DistanceMatrix::from_dense(const std::vector<std::vector<double>>& entries) {
  const std::size_t n = entries.size();
  require(n >= 1, ErrorClass::InvalidArgument, "empty distance matrix");
  for (std::size_t i = 0; i < n; ++i) {
    require(entries[i].size() == n, ErrorClass::InvalidArgument,
            "distance matrix row " + std::to_string(i) + " is not length " + std::to_string(n));
  }
  return from_upper(n, [&](std::size_t i, std::size_t j) { return entries[i][j]; });
}

void DistanceMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double v = entries_[i * n_ + j];
      require(std::isfinite(v) && v >= 0.0, ErrorClass::InvalidArgument,
              "distance (" + std::to_string(i) + "," + std::to_string(j) +
                  ") must be finite and nonnegative");
    }
  }
}

double DistanceMatrix::row_sum(std::size_t i) const {
  double s = 0.0;
  const double* r = entries_.data() + i * n_;
  for (std::size_t j = 0; j < n_; ++j) s += r[j];
  return s;
}

Selection Selection::from_bits(const Bits& bits) {
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) chosen.push_back(i);
  return Selection(bits.size(), std::move(chosen));
}

Selection Selection::from_indices(std::size_t n, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  require(std::adjacent_find(indices.begin(), indices.end()) == indices.end(),
          ErrorClass::InvalidArgument, "selection indices must be distinct");
  require(indices.empty() || indices.back() < n, ErrorClass::InvalidArgument,
          "selection index out of range");
  return Selection(n, std::move(indices));
}

Bits Selection::bits() const {
  Bits b(n_, 0);
  for (auto i : chosen_) b[i] = 1;
  return b;
}

}  // namespace selector
