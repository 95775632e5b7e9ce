#pragma once

#include <span>
#include <string>

#include "selector/data_matrix.hpp"

namespace selector {

/// Pairwise metric choices. Minkowski carries its exponent; the standardized
/// Euclidean variant scales each coordinate by the per-column sample standard
/// deviation of the whole dataset (ddof = 1).
struct MetricKind {
  enum class Tag { Euclidean, Correlation, Cosine, Minkowski, StandardizedEuclidean };
  Tag tag = Tag::Euclidean;
  double p = 2.0;  // Minkowski exponent, > 0

  static MetricKind euclidean() { return {Tag::Euclidean, 2.0}; }
  static MetricKind correlation() { return {Tag::Correlation, 2.0}; }
  static MetricKind cosine() { return {Tag::Cosine, 2.0}; }
  static MetricKind minkowski(double p);
  static MetricKind standardized_euclidean() { return {Tag::StandardizedEuclidean, 2.0}; }

  /// Parses the CLI spelling: euclidean|correlation|cosine|minkowski:<p>|seuclidean.
  static MetricKind parse(const std::string& text);
  std::string name() const;
};

double euclidean(std::span<const double> a, std::span<const double> b);

/// 1 - Pearson correlation; in [0, 2]. Errors on constant input (undefined
/// correlation) and on vectors shorter than 2.
double correlation_distance(std::span<const double> a, std::span<const double> b);

/// 1 - cosine similarity; errors on zero-norm input.
double cosine_distance(std::span<const double> a, std::span<const double> b);

double minkowski_distance(std::span<const double> a, std::span<const double> b, double p);

/// Euclidean after dividing coordinate k's difference by inv_scale[k]'s
/// reciprocal (inv_scale holds 1/sigma_k, precomputed per dataset).
double standardized_euclidean(std::span<const double> a, std::span<const double> b,
                              std::span<const double> inv_scale);

/// Full pairwise matrix; symmetric and zero-diagonal by construction. Pairwise
/// metric failures are rethrown naming the offending row pair. `threads` caps
/// the worker count; the result does not depend on it.
DistanceMatrix build_distance_matrix(const DataMatrix& data, const MetricKind& metric,
                                     unsigned threads = 1);

}  // namespace selector
