#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selector/csv.hpp"
#include "selector/data_matrix.hpp"
#include "selector/distance.hpp"
#include "selector/objective.hpp"
#include "selector/solvers.hpp"
#include "selector/synthgen.hpp"

namespace selector {

/// Per-asset daily simple returns over a shared date range.
struct ReturnsMatrix {
  DataMatrix data;                 // one row per asset
  std::vector<std::string> dates;  // return dates; data columns == dates.size()
};

struct IndexSeries {
  enum class Kind { ProxyIndex, SelectedSubset };
  std::vector<double> values;
  Kind kind = Kind::ProxyIndex;
};

/// Restricts the table to dates in [start, end] (inclusive, ISO-8601 order).
PriceTable slice_window(const PriceTable& table, const std::string& start,
                        const std::string& end);

/// Simple returns r_t = p_t / p_{t-1} - 1. Every asset must have a positive
/// price on every date; assets with missing quotes are rejected by name.
ReturnsMatrix returns_from_prices(const PriceTable& table);

/// Equal-weighted average of all assets, date by date.
IndexSeries proxy_index(const ReturnsMatrix& returns);

/// Equal-weighted average of the selected assets. A full selection follows
/// the identical arithmetic path as proxy_index (bitwise-equal result).
IndexSeries subset_index(const ReturnsMatrix& returns, const Selection& selection);

double mse(const IndexSeries& a, const IndexSeries& b);

/// Compounded cumulative returns: c_t = prod_{u<=t}(1 + r_u) - 1.
IndexSeries cumulative_returns(const IndexSeries& series);

/// Exact minimum of the selection cost over all weight-k subsets
/// (C(n,k) <= 1e7 guard); the feasible-space counterpart of the 2^n solver.
struct BestSubset {
  Selection selection;
  double cost = 0.0;
  std::uint64_t evaluated = 0;
};
BestSubset best_weight_k_selection(const SelectorProblem& problem);

/// Solves a selector instance with the configured backend. The exhaustive
/// backend enumerates all 2^n states while that is feasible (n <= 30) and
/// otherwise falls back to exact weight-k subset enumeration.
SolveReport solve_selector(const SelectorProblem& problem, const SolverConfig& config);

struct MseCurveEntry {
  std::size_t k = 0;
  Selection selection;
  double mse = 0.0;
};

/// For each k: build the selector problem on the returns' distance structure,
/// solve it, and score the reconstruction against the proxy index.
std::vector<MseCurveEntry> mse_curve(const ReturnsMatrix& returns,
                                     const std::vector<std::size_t>& k_values,
                                     const MetricKind& metric, double penalty_a,
                                     const SolverConfig& solver);

/// Fraction of size-2 selections containing exactly one index of each class.
double class_accuracy(const std::vector<Selection>& selections,
                      const std::vector<int>& classes);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

struct CombinationStats {
  std::optional<std::size_t> k_filter;
  std::uint64_t count = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::pair<double, double>> quantiles;  // (probe, interpolated value)
  Histogram histogram;
  double target_cost = 0.0;
  double target_percentile = 0.0;  // fraction of costs strictly below target
};

/// Cost distribution over either all 2^n bit vectors (n <= 24) or all
/// weight-k subsets (C(n,k) <= 1e7). The target's cost is computed along the
/// same evaluation path as the enumerated candidates, so a target equal to
/// the enumerated minimum reports percentile exactly 0.
CombinationStats enumerate_combinations(const SelectorProblem& problem,
                                        std::optional<std::size_t> k_filter,
                                        const Selection& target, unsigned threads = 1);

std::string combination_stats_to_json(const CombinationStats& stats);

struct SigmaSweepEntry {
  double sigma = 0.0;
  double accuracy = 0.0;
};

/// Per-sigma accuracy of k=2 selections on regenerated trig datasets:
/// a trial succeeds when the solver picks exactly one curve of each class.
/// Heuristic results with Hamming weight != 2 count as failures.
std::vector<SigmaSweepEntry> sweep_sigma(const TrigSpec& base, const std::vector<double>& sigmas,
                                         int trials, double penalty_a,
                                         const SolverConfig& solver, std::uint64_t seed);

}  // namespace selector
