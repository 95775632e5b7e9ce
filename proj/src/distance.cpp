#include "selector/distance.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "selector/errors.hpp"

namespace selector {

namespace {

void check_same_length(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorClass::InvalidArgument,
          "vector length mismatch: " + std::to_string(a.size()) + " vs " +
              std::to_string(b.size()));
}

}  // namespace

MetricKind MetricKind::minkowski(double p) {
  require(p > 0.0, ErrorClass::InvalidArgument, "Minkowski exponent must be > 0");
  return {Tag::Minkowski, p};
}

MetricKind MetricKind::parse(const std::string& text) {
  if (text == "euclidean") return euclidean();
  if (text == "correlation") return correlation();
  if (text == "cosine") return cosine();
  if (text == "seuclidean") return standardized_euclidean();
  const std::string prefix = "minkowski:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return minkowski(std::stod(text.substr(prefix.size())));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorClass::Parse, "bad Minkowski exponent in '" + text + "'");
    }
  }
  fail(ErrorClass::Parse,
       "unknown metric '" + text +
           "' (expected euclidean|correlation|cosine|minkowski:<p>|seuclidean)");
}

std::string MetricKind::name() const {
  switch (tag) {
    case Tag::Euclidean: return "euclidean";
    case Tag::Correlation: return "correlation";
    case Tag::Cosine: return "cosine";
    case Tag::Minkowski: return "minkowski:" + std::to_string(p);
    case Tag::StandardizedEuclidean: return "seuclidean";
  }
  return "?";
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double correlation_distance(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  require(a.size() >= 2, ErrorClass::InvalidArgument,
          "correlation distance needs vectors of length >= 2");
  const std::size_t m = a.size();
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mean_a += a[k];
    mean_b += b[k];
  }
  mean_a /= static_cast<double>(m);
  mean_b /= static_cast<double>(m);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double da = a[k] - mean_a;
    const double db = b[k] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  require(saa > 0.0 && sbb > 0.0, ErrorClass::Degenerate,
          "correlation distance undefined for a constant vector (zero variance)");
  double r = sab / std::sqrt(saa * sbb);
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return 1.0 - r;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  check_same_length(a, b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  require(na > 0.0 && nb > 0.0, ErrorClass::Degenerate,
          "cosine distance undefined for a zero vector");
  double c = dot / std::sqrt(na * nb);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return 1.0 - c;
}

double minkowski_distance(std::span<const double> a, std::span<const double> b, double p) {
  check_same_length(a, b);
  require(p > 0.0, ErrorClass::InvalidArgument, "Minkowski exponent must be > 0");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::pow(std::abs(a[k] - b[k]), p);
  return std::pow(s, 1.0 / p);
}

double standardized_euclidean(std::span<const double> a, std::span<const double> b,
                              std::span<const double> inv_scale) {
  check_same_length(a, b);
  require(inv_scale.size() == a.size(), ErrorClass::InvalidArgument,
          "scale vector length mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = (a[k] - b[k]) * inv_scale[k];
    s += d * d;
  }
  return std::sqrt(s);
}

namespace {

/// Per-column 1/stddev (sample, ddof=1) over the whole dataset.
std::vector<double> column_inverse_scales(const DataMatrix& data) {
  const std::size_t n = data.num_rows(), m = data.num_cols();
  std::vector<double> mean(m, 0.0), var(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = data.row(i);
    for (std::size_t k = 0; k < m; ++k) mean[k] += r[k];
  }
  for (std::size_t k = 0; k < m; ++k) mean[k] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = data.row(i);
    for (std::size_t k = 0; k < m; ++k) {
      const double d = r[k] - mean[k];
      var[k] += d * d;
    }
  }
  std::vector<double> inv(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    var[k] /= static_cast<double>(n - 1);
    require(var[k] > 0.0, ErrorClass::Degenerate,
            "standardized Euclidean undefined: column " + std::to_string(k) +
                " has zero variance");
    inv[k] = 1.0 / std::sqrt(var[k]);
  }
  return inv;
}

}  // namespace

DistanceMatrix build_distance_matrix(const DataMatrix& data, const MetricKind& metric,
                                     unsigned threads) {
  const std::size_t n = data.num_rows();
  std::vector<double> inv_scale;
  if (metric.tag == MetricKind::Tag::StandardizedEuclidean)
    inv_scale = column_inverse_scales(data);

  auto pair_distance = [&](std::size_t i, std::size_t j) -> double {
    try {
      switch (metric.tag) {
        case MetricKind::Tag::Euclidean: return euclidean(data.row(i), data.row(j));
        case MetricKind::Tag::Correlation: return correlation_distance(data.row(i), data.row(j));
        case MetricKind::Tag::Cosine: return cosine_distance(data.row(i), data.row(j));
        case MetricKind::Tag::Minkowski:
          return minkowski_distance(data.row(i), data.row(j), metric.p);
        case MetricKind::Tag::StandardizedEuclidean:
          return standardized_euclidean(data.row(i), data.row(j), inv_scale);
      }
      return 0.0;
    } catch (const Error& e) {
      throw Error(e.error_class(), std::string(e.what()) + " [rows (" + std::to_string(i) + ", " +
                                       std::to_string(j) + ")]");
    }
  };

  if (threads <= 1 || n < 64) {
    return DistanceMatrix::from_upper(n, pair_distance);
  }

  // Row-parallel fill into a staging buffer; entries are independent, so the
  // result is identical for any worker count.
  std::vector<std::vector<double>> staged(n, std::vector<double>(n, 0.0));
  std::exception_ptr first_error;
  std::atomic<std::size_t> next_row{0};
  std::atomic<bool> stop{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next_row.fetch_add(1);
      if (i >= n || stop.load()) return;
      for (std::size_t j = i + 1; j < n; ++j) {
        try {
          staged[i][j] = pair_distance(i, j);
        } catch (...) {
          if (!stop.exchange(true)) first_error = std::current_exception();
          return;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<unsigned>(threads, std::thread::hardware_concurrency() + 1);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) staged[i][j] = staged[j][i];
  return DistanceMatrix::from_dense(staged);
}

}  // namespace selector
