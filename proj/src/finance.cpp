#include "selector/finance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include <json.hpp>

#include "selector/errors.hpp"
#include "selector/rng.hpp"

namespace selector {

PriceTable slice_window(const PriceTable& table, const std::string& start,
                        const std::string& end) {
  require(start <= end, ErrorClass::InvalidArgument, "window start must not exceed end");
  PriceTable out;
  out.tickers = table.tickers;
  std::vector<std::size_t> keep;
  for (std::size_t d = 0; d < table.dates.size(); ++d) {
    if (table.dates[d] >= start && table.dates[d] <= end) {
      keep.push_back(d);
      out.dates.push_back(table.dates[d]);
    }
  }
  require(!out.dates.empty(), ErrorClass::InvalidArgument,
          "no dates fall inside window [" + start + ", " + end + "]");
  out.close.resize(out.tickers.size() * out.dates.size());
  for (std::size_t t = 0; t < out.tickers.size(); ++t) {
    for (std::size_t d = 0; d < keep.size(); ++d) {
      out.close[t * out.dates.size() + d] = table.at(t, keep[d]);
    }
  }
  return out;
}

ReturnsMatrix returns_from_prices(const PriceTable& table) {
  const std::size_t num_dates = table.dates.size();
  require(num_dates >= 2, ErrorClass::InvalidArgument,
          "need at least 2 price dates to form returns");
  for (std::size_t t = 0; t < table.tickers.size(); ++t) {
    for (std::size_t d = 0; d < num_dates; ++d) {
      require(table.has(t, d), ErrorClass::MissingData,
              "asset " + table.tickers[t] + " has no price on " + table.dates[d] +
                  " (missing data is rejected, not imputed)");
      require(table.at(t, d) > 0.0, ErrorClass::InvalidArgument,
              "asset " + table.tickers[t] + " has nonpositive price on " + table.dates[d]);
    }
  }
  std::vector<std::vector<double>> rows(table.tickers.size());
  for (std::size_t t = 0; t < table.tickers.size(); ++t) {
    rows[t].resize(num_dates - 1);
    for (std::size_t d = 1; d < num_dates; ++d) {
      rows[t][d - 1] = table.at(t, d) / table.at(t, d - 1) - 1.0;
    }
  }
  std::vector<std::string> dates(table.dates.begin() + 1, table.dates.end());
  return {DataMatrix(std::move(rows), table.tickers), std::move(dates)};
}

namespace {

/// Shared averaging path: summing in ascending index order keeps
/// subset_index over the full selection bitwise equal to proxy_index.
IndexSeries mean_over_rows(const DataMatrix& data, const std::vector<std::size_t>& indices,
                           IndexSeries::Kind kind) {
  const std::size_t m = data.num_cols();
  IndexSeries series;
  series.kind = kind;
  series.values.assign(m, 0.0);
  for (const std::size_t i : indices) {
    auto row = data.row(i);
    for (std::size_t c = 0; c < m; ++c) series.values[c] += row[c];
  }
  const double count = static_cast<double>(indices.size());
  for (double& v : series.values) v /= count;
  return series;
}

}  // namespace

IndexSeries proxy_index(const ReturnsMatrix& returns) {
  std::vector<std::size_t> all(returns.data.num_rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return mean_over_rows(returns.data, all, IndexSeries::Kind::ProxyIndex);
}

IndexSeries subset_index(const ReturnsMatrix& returns, const Selection& selection) {
  require(selection.size() >= 1, ErrorClass::InvalidArgument,
          "subset index needs a nonempty selection");
  require(selection.universe_size() == returns.data.num_rows(), ErrorClass::InvalidArgument,
          "selection universe does not match the asset count");
  return mean_over_rows(returns.data, selection.chosen(), IndexSeries::Kind::SelectedSubset);
}

double mse(const IndexSeries& a, const IndexSeries& b) {
  require(a.values.size() == b.values.size(), ErrorClass::InvalidArgument,
          "series length mismatch");
  require(!a.values.empty(), ErrorClass::InvalidArgument, "empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.values.size());
}

IndexSeries cumulative_returns(const IndexSeries& series) {
  IndexSeries out;
  out.kind = series.kind;
  out.values.reserve(series.values.size());
  double growth = 1.0;
  for (const double r : series.values) {
    require(r > -1.0, ErrorClass::Degenerate,
            "cumulative returns undefined at a return <= -1");
    growth *= 1.0 + r;
    out.values.push_back(growth - 1.0);
  }
  return out;
}

namespace {

constexpr std::uint64_t kSubsetGuard = 10'000'000;       // C(n,k) cap
constexpr std::size_t kFullEnumerationGuard = 24;        // 2^n cap

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > 1e18L) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc + 0.5L);
}

/// Cost of a subset (any size) along one fixed summation path; both the
/// enumeration scan and the target evaluation run through here so that equal
/// states give bitwise-equal costs.
double subset_cost(const SelectorProblem& problem, const std::vector<std::size_t>& subset) {
  const double n = static_cast<double>(problem.size());
  double pair_sum = 0.0;
  double row_sum = 0.0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    row_sum += problem.d.row_sum(subset[a]);
    auto da = problem.d.row(subset[a]);
    for (std::size_t b = a + 1; b < subset.size(); ++b) pair_sum += da[subset[b]];
  }
  const double dev = static_cast<double>(subset.size()) - static_cast<double>(problem.k);
  return -2.0 * pair_sum / (2.0 * static_cast<double>(problem.k)) + row_sum / n +
         problem.penalty_a * dev * dev;
}

/// Visits all k-subsets of [0, n) in lexicographic index order (which is also
/// ascending bitstring order with index 0 as MSB).
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit&& visit) {
  std::vector<std::size_t> c(k);
  std::iota(c.begin(), c.end(), std::size_t{0});
  if (k == 0) {
    visit(c);
    return;
  }
  for (;;) {
    visit(c);
    // advance to the next combination
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace

BestSubset best_weight_k_selection(const SelectorProblem& problem) {
  const std::size_t n = problem.size();
  const std::uint64_t total = binomial(n, problem.k);
  require(total <= kSubsetGuard, ErrorClass::LimitExceeded,
          "C(n,k) = " + std::to_string(total) + " exceeds the subset enumeration cap");
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best;
  std::uint64_t visited = 0;
  for_each_combination(n, problem.k, [&](const std::vector<std::size_t>& subset) {
    ++visited;
    const double cost = subset_cost(problem, subset);
    if (cost < best_cost) {  // first hit wins ties: lex order == bitstring order
      best_cost = cost;
      best = subset;
    }
  });
  return {Selection::from_indices(n, std::move(best)), best_cost, visited};
}

SolveReport solve_selector(const SelectorProblem& problem, const SolverConfig& config) {
  SolverConfig local = config;
  local.target_k = problem.k;
  if (local.backend == Backend::RandomBaseline && local.baseline.k == 0)
    local.baseline.k = problem.k;

  if (local.backend == Backend::Exhaustive && problem.size() > 30) {
    BestSubset best = best_weight_k_selection(problem);
    SolveReport report;
    report.best_bits = best.selection.bits();
    report.energy = best.cost;
    report.hamming_weight = best.selection.size();
    report.constraint_satisfied = report.hamming_weight == problem.k;
    report.target_k = problem.k;
    report.solver_name = "exhaustive-subsets";
    report.seed = local.seed;
    report.trials = 1;
    report.evaluations = best.evaluated;
    return report;
  }
  return solve(compile_qubo(problem), local);
}

std::vector<MseCurveEntry> mse_curve(const ReturnsMatrix& returns,
                                     const std::vector<std::size_t>& k_values,
                                     const MetricKind& metric, double penalty_a,
                                     const SolverConfig& solver) {
  std::vector<MseCurveEntry> entries;
  if (k_values.empty()) return entries;
  const DistanceMatrix d = build_distance_matrix(returns.data, metric, solver.threads);
  const IndexSeries proxy = proxy_index(returns);
  for (const std::size_t k : k_values) {
    SelectorProblem problem(d, k, penalty_a);
    SolverConfig per_k = solver;
    per_k.seed = derive_seed(solver.seed, 0x4B00 + k);
    const SolveReport report = solve_selector(problem, per_k);
    Selection selection = Selection::from_bits(report.best_bits);
    const double err = mse(subset_index(returns, selection), proxy);
    entries.push_back({k, std::move(selection), err});
  }
  return entries;
}

double class_accuracy(const std::vector<Selection>& selections,
                      const std::vector<int>& classes) {
  require(!selections.empty(), ErrorClass::InvalidArgument, "no selections given");
  std::set<int> distinct(classes.begin(), classes.end());
  require(distinct.size() == 2, ErrorClass::InvalidArgument,
          "class accuracy needs binary class labels");
  std::size_t hits = 0;
  for (const auto& sel : selections) {
    require(sel.size() == 2, ErrorClass::InvalidArgument,
            "class accuracy is defined for selections of size 2, got size " +
                std::to_string(sel.size()));
    require(sel.universe_size() == classes.size(), ErrorClass::InvalidArgument,
            "selection universe does not match the label count");
    const auto& c = sel.chosen();
    if (classes[c[0]] != classes[c[1]]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(selections.size());
}

namespace {

struct StreamStats {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::uint64_t below_target = 0;

  void add(double cost, double target) {
    ++count;
    sum += cost;
    sum_sq += cost * cost;
    min = std::min(min, cost);
    max = std::max(max, cost);
    if (cost < target) ++below_target;
  }
  void merge(const StreamStats& other) {
    count += other.count;
    sum += other.sum;
    sum_sq += other.sum_sq;
    min = std::min(min, other.min);
    max = std::max(max, other.max);
    below_target += other.below_target;
  }
};

constexpr std::size_t kHistogramBins = 64;
constexpr std::size_t kQuantileBins = 2048;

/// Runs `fn(chunk_index)` over a fixed number of chunks, optionally in
/// parallel; the chunk decomposition (and therefore every merged result) is
/// independent of the worker count.
template <typename Fn>
void run_chunks(std::size_t num_chunks, unsigned threads, Fn&& fn) {
  if (threads <= 1) {
    for (std::size_t c = 0; c < num_chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= num_chunks) return;
      fn(c);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::vector<std::pair<double, double>> quantiles_from_histogram(
    const std::vector<std::uint64_t>& counts, double lo, double hi, std::uint64_t total) {
  const std::vector<double> probes = {0.01, 0.25, 0.5, 0.75, 0.99};
  std::vector<std::pair<double, double>> out;
  const double width = (hi - lo) / static_cast<double>(counts.size());
  for (const double q : probes) {
    const auto rank = static_cast<std::uint64_t>(q * static_cast<double>(total));
    std::uint64_t cum = 0;
    double value = hi;
    for (std::size_t b = 0; b < counts.size(); ++b) {
      if (cum + counts[b] >= rank + 1) {
        const double within =
            counts[b] == 0 ? 0.0
                           : static_cast<double>(rank + 1 - cum) / static_cast<double>(counts[b]);
        value = lo + (static_cast<double>(b) + within) * width;
        break;
      }
      cum += counts[b];
    }
    out.emplace_back(q, value);
  }
  return out;
}

}  // namespace

CombinationStats enumerate_combinations(const SelectorProblem& problem,
                                        std::optional<std::size_t> k_filter,
                                        const Selection& target, unsigned threads) {
  const std::size_t n = problem.size();
  require(target.universe_size() == n, ErrorClass::InvalidArgument,
          "target selection universe does not match the problem size");

  CombinationStats stats;
  stats.k_filter = k_filter;
  stats.target_cost = subset_cost(problem, target.chosen());

  StreamStats stream;
  std::vector<std::uint64_t> fine_counts(kQuantileBins, 0);
  std::vector<std::uint64_t> coarse_counts(kHistogramBins, 0);

  if (k_filter) {
    require(*k_filter <= n, ErrorClass::InvalidArgument, "k_filter exceeds n");
    const std::uint64_t total = binomial(n, *k_filter);
    require(total <= kSubsetGuard, ErrorClass::LimitExceeded,
            "C(n,k) = " + std::to_string(total) + " exceeds the enumeration cap of " +
                std::to_string(kSubsetGuard));
    // Single-threaded scan: the combination walk is inherently sequential and
    // cheap at the guarded sizes. Two passes: stats, then histogram.
    for_each_combination(n, *k_filter, [&](const std::vector<std::size_t>& subset) {
      stream.add(subset_cost(problem, subset), stats.target_cost);
    });
    const double lo = stream.min, hi = stream.max;
    const double span = hi > lo ? hi - lo : 1.0;
    for_each_combination(n, *k_filter, [&](const std::vector<std::size_t>& subset) {
      const double c = subset_cost(problem, subset);
      auto fine = static_cast<std::size_t>((c - lo) / span * kQuantileBins);
      auto coarse = static_cast<std::size_t>((c - lo) / span * kHistogramBins);
      fine_counts[std::min(fine, kQuantileBins - 1)]++;
      coarse_counts[std::min(coarse, kHistogramBins - 1)]++;
    });
  } else {
    require(n <= kFullEnumerationGuard, ErrorClass::LimitExceeded,
            "full enumeration is guarded at n <= " + std::to_string(kFullEnumerationGuard) +
                "; got n = " + std::to_string(n) + " (use a k filter)");
    const std::uint64_t total = 1ULL << n;
    const std::size_t num_chunks = 256;
    const std::uint64_t chunk_size = (total + num_chunks - 1) / num_chunks;

    // Every state is evaluated fresh from its index, so costs are exact and
    // chunk boundaries cannot change any value.
    auto state_cost = [&](std::uint64_t state, std::vector<std::size_t>& subset) {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (state & (1ULL << (n - 1 - i))) subset.push_back(i);
      }
      return subset_cost(problem, subset);
    };

    std::vector<StreamStats> chunk_stats(num_chunks);
    run_chunks(num_chunks, threads, [&](std::size_t c) {
      std::vector<std::size_t> scratch;
      scratch.reserve(n);
      const std::uint64_t begin = c * chunk_size;
      const std::uint64_t end = std::min(total, begin + chunk_size);
      for (std::uint64_t s = begin; s < end; ++s)
        chunk_stats[c].add(state_cost(s, scratch), stats.target_cost);
    });
    for (const auto& cs : chunk_stats) stream.merge(cs);

    const double lo = stream.min, hi = stream.max;
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<std::vector<std::uint64_t>> chunk_fine(num_chunks);
    std::vector<std::vector<std::uint64_t>> chunk_coarse(num_chunks);
    run_chunks(num_chunks, threads, [&](std::size_t c) {
      chunk_fine[c].assign(kQuantileBins, 0);
      chunk_coarse[c].assign(kHistogramBins, 0);
      std::vector<std::size_t> scratch;
      scratch.reserve(n);
      const std::uint64_t begin = c * chunk_size;
      const std::uint64_t end = std::min(total, begin + chunk_size);
      for (std::uint64_t s = begin; s < end; ++s) {
        const double cost = state_cost(s, scratch);
        auto fine = static_cast<std::size_t>((cost - lo) / span * kQuantileBins);
        auto coarse = static_cast<std::size_t>((cost - lo) / span * kHistogramBins);
        chunk_fine[c][std::min(fine, kQuantileBins - 1)]++;
        chunk_coarse[c][std::min(coarse, kHistogramBins - 1)]++;
      }
    });
    for (std::size_t c = 0; c < num_chunks; ++c) {
      for (std::size_t b = 0; b < kQuantileBins; ++b) fine_counts[b] += chunk_fine[c][b];
      for (std::size_t b = 0; b < kHistogramBins; ++b) coarse_counts[b] += chunk_coarse[c][b];
    }
  }

  stats.count = stream.count;
  stats.mean = stream.sum / static_cast<double>(stream.count);
  const double var =
      std::max(0.0, stream.sum_sq / static_cast<double>(stream.count) - stats.mean * stats.mean);
  stats.std_dev = std::sqrt(var);
  stats.min = stream.min;
  stats.max = stream.max;
  stats.histogram = {stream.min, stream.max, std::move(coarse_counts)};
  stats.quantiles = quantiles_from_histogram(fine_counts, stream.min, stream.max, stream.count);
  stats.target_percentile =
      static_cast<double>(stream.below_target) / static_cast<double>(stream.count);
  return stats;
}

std::string combination_stats_to_json(const CombinationStats& stats) {
  nlohmann::ordered_json doc;
  if (stats.k_filter) doc["k_filter"] = *stats.k_filter;
  else doc["k_filter"] = nullptr;
  doc["count"] = stats.count;
  doc["mean"] = stats.mean;
  doc["std"] = stats.std_dev;
  doc["min"] = stats.min;
  doc["max"] = stats.max;
  auto quantiles = nlohmann::ordered_json::object();
  for (const auto& [q, v] : stats.quantiles) {
    char key[16];
    std::snprintf(key, sizeof(key), "q%02d", static_cast<int>(q * 100 + 0.5));
    quantiles[key] = v;
  }
  doc["quantiles"] = std::move(quantiles);
  doc["histogram"] = {{"lo", stats.histogram.lo},
                      {"hi", stats.histogram.hi},
                      {"counts", stats.histogram.counts}};
  doc["target_cost"] = stats.target_cost;
  doc["target_percentile"] = stats.target_percentile;
  return doc.dump(2) + "\n";
}

std::vector<SigmaSweepEntry> sweep_sigma(const TrigSpec& base, const std::vector<double>& sigmas,
                                         int trials, double penalty_a,
                                         const SolverConfig& solver, std::uint64_t seed) {
  require(trials >= 1, ErrorClass::InvalidArgument, "trials must be >= 1");
  std::vector<SigmaSweepEntry> table;
  table.reserve(sigmas.size());
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    std::size_t hits = 0;
    for (int t = 0; t < trials; ++t) {
      TrigSpec spec = base;
      spec.sigma = sigmas[si];
      spec.seed = derive_seed(seed, si * static_cast<std::size_t>(trials) +
                                        static_cast<std::size_t>(t));
      const LabeledData data = gen_trig(spec);
      const DistanceMatrix d =
          build_distance_matrix(data.data, MetricKind::correlation(), solver.threads);
      SelectorProblem problem(d, 2, penalty_a);
      SolverConfig per_trial = solver;
      per_trial.seed = derive_seed(spec.seed, 0x50);
      const SolveReport report = solve_selector(problem, per_trial);
      const Selection sel = Selection::from_bits(report.best_bits);
      if (sel.size() == 2 && data.classes[sel.chosen()[0]] != data.classes[sel.chosen()[1]]) {
        ++hits;
      }
    }
    table.push_back({sigmas[si], static_cast<double>(hits) / static_cast<double>(trials)});
  }
  return table;
}

}  // namespace selector
