#include "selector/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "selector/errors.hpp"
#include "selector/rng.hpp"

namespace selector {

namespace {

constexpr std::size_t kExhaustiveGuard = 30;
constexpr std::uint64_t kTrialStream = 0x545249414CULL;  // trial-seed salt

/// Flat symmetric view of a QuboModel for tight solver loops.
struct DenseView {
  std::size_t n = 0;
  double offset = 0.0;
  std::vector<double> linear;
  std::vector<double> couple;  // n x n symmetric, zero diagonal

  explicit DenseView(const QuboModel& model)
      : n(model.num_vars()), offset(model.offset()), linear(n), couple(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      linear[i] = model.linear(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = model.coeff(i, j);
        couple[i * n + j] = c;
        couple[j * n + i] = c;
      }
    }
  }

  double energy(const Bits& x) const {
    double e = offset;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      e += linear[i];
      const double* row = couple.data() + i * n;
      for (std::size_t j = i + 1; j < n; ++j)
        if (x[j]) e += row[j];
    }
    return e;
  }

  /// Energy change of flipping bit i in state x.
  double flip_delta(const Bits& x, std::size_t i) const {
    double acc = linear[i];
    const double* row = couple.data() + i * n;
    for (std::size_t j = 0; j < n; ++j)
      if (x[j]) acc += row[j];
    return (x[i] ? -1.0 : 1.0) * acc;
  }

  void fill_deltas(const Bits& x, std::vector<double>& deltas) const {
    for (std::size_t i = 0; i < n; ++i) deltas[i] = flip_delta(x, i);
  }

  /// Applies the flip and keeps energy/deltas consistent. O(n).
  void apply_flip(Bits& x, std::size_t i, double& energy_acc,
                  std::vector<double>& deltas) const {
    energy_acc += deltas[i];
    const double step = x[i] ? -1.0 : 1.0;  // change of x_i
    x[i] = static_cast<std::uint8_t>(1 - x[i]);
    deltas[i] = -deltas[i];
    const double* row = couple.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      deltas[j] += (x[j] ? -1.0 : 1.0) * row[j] * step;
    }
  }
};

struct ReadResult {
  Bits bits;
  double energy = 0.0;  // exact re-evaluation at bits
  std::uint64_t evaluations = 0;
};

/// Merge rule shared by every multi-read backend: (energy, bitstring value).
bool read_better(const ReadResult& a, const ReadResult& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  return bits_less(a.bits, b.bits);
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  Bits x(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>(rng() & 1u);
  return x;
}

void track_best(const Bits& x, double energy, Bits& best, double& best_energy) {
  if (energy < best_energy || (energy == best_energy && bits_less(x, best))) {
    best = x;
    best_energy = energy;
  }
}

ReadResult sa_read(const DenseView& view, std::uint64_t seed, double t_max, double t_min,
                   int sweeps, detail::SaStats* stats) {
  auto rng = make_rng(seed);
  const std::size_t n = view.n;
  Bits x = random_bits(rng, n);
  std::vector<double> deltas(n);
  view.fill_deltas(x, deltas);
  double energy = view.energy(x);
  Bits best = x;
  double best_energy = energy;

  const double ratio = (sweeps > 0) ? std::pow(t_min / t_max, 1.0 / sweeps) : 1.0;
  double temperature = t_max;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t proposals = 0;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    for (const std::size_t i : order) {
      ++proposals;
      const double d = deltas[i];
      bool accept = d <= 0.0;
      if (!accept) {
        accept = uniform01(rng) < std::exp(-d / temperature);
        if (accept && stats) ++stats->uphill_accepts;
      }
      if (accept) {
        if (stats) ++stats->accepts;
        view.apply_flip(x, i, energy, deltas);
        track_best(x, energy, best, best_energy);
      }
    }
    temperature *= ratio;
  }
  if (stats) stats->proposals += proposals;
  const double exact = view.energy(best);  // drift-free report energy
  return {std::move(best), exact, proposals};
}

struct TabuTracker {
  std::vector<detail::TabuTraceStep>* steps = nullptr;
};

ReadResult tabu_read(const DenseView& view, std::uint64_t seed, int tenure, int max_iters,
                     const TabuTracker& tracker) {
  auto rng = make_rng(seed);
  const std::size_t n = view.n;
  Bits x = random_bits(rng, n);
  std::vector<double> deltas(n);
  view.fill_deltas(x, deltas);
  double energy = view.energy(x);
  Bits best = x;
  double best_energy = energy;
  std::vector<long> tabu_until(n, -1);
  std::uint64_t moves = 0;

  for (long iter = 0; iter < max_iters; ++iter) {
    std::size_t chosen = n;
    bool chosen_tabu = false;
    double chosen_delta = 0.0;
    bool had_aspirating = false;
    double best_aspirating = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool is_tabu = tabu_until[i] > iter;
      const bool aspirates = is_tabu && (energy + deltas[i] < best_energy);
      if (is_tabu && aspirates) {
        if (!had_aspirating || deltas[i] < best_aspirating) best_aspirating = deltas[i];
        had_aspirating = true;
      }
      if (is_tabu && !aspirates) continue;
      if (chosen == n || deltas[i] < chosen_delta) {
        chosen = i;
        chosen_delta = deltas[i];
        chosen_tabu = is_tabu;
      }
    }
    if (chosen == n) {
      // Everything tabu and nothing aspirates: take the least-bad move anyway.
      for (std::size_t i = 0; i < n; ++i) {
        if (chosen == n || deltas[i] < chosen_delta) {
          chosen = i;
          chosen_delta = deltas[i];
          chosen_tabu = true;
        }
      }
    }
    if (tracker.steps) {
      tracker.steps->push_back(
          {chosen_delta, chosen_tabu, had_aspirating, had_aspirating ? best_aspirating : 0.0});
    }
    view.apply_flip(x, chosen, energy, deltas);
    tabu_until[chosen] = iter + 1 + tenure;
    track_best(x, energy, best, best_energy);
    ++moves;
  }
  const double exact = view.energy(best);
  return {std::move(best), exact, moves};
}

ReadResult baseline_read(const DenseView& view, std::uint64_t seed, std::size_t k) {
  auto rng = make_rng(seed);
  const std::size_t n = view.n;
  // Partial Fisher-Yates: first k entries of a shuffled index array.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  Bits x(n, 0);
  for (std::size_t i = 0; i < k; ++i) x[idx[i]] = 1;
  const double exact = view.energy(x);
  return {std::move(x), exact, 1};
}

/// Runs num_reads independent reads (optionally across threads) and merges by
/// (energy, bitstring value). Each read is a pure function of its derived
/// seed, so the outcome does not depend on the partition.
template <typename ReadFn>
ReadResult best_of_reads(int num_reads, unsigned threads, ReadFn&& read_fn) {
  ReadResult best;
  bool have_best = false;
  if (threads <= 1 || num_reads < 4) {
    std::uint64_t total_evals = 0;
    for (int r = 0; r < num_reads; ++r) {
      ReadResult candidate = read_fn(r);
      total_evals += candidate.evaluations;
      if (!have_best || read_better(candidate, best)) {
        best = std::move(candidate);
        have_best = true;
      }
    }
    best.evaluations = total_evals;
    return best;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(num_reads));
  std::vector<ReadResult> partial(workers);
  std::vector<std::uint64_t> partial_evals(workers, 0);
  std::vector<std::uint8_t> has_partial(workers, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int r = static_cast<int>(w); r < num_reads; r += static_cast<int>(workers)) {
        ReadResult candidate = read_fn(r);
        partial_evals[w] += candidate.evaluations;
        if (!has_partial[w] || read_better(candidate, partial[w])) {
          partial[w] = std::move(candidate);
          has_partial[w] = 1;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total_evals = 0;
  for (unsigned w = 0; w < workers; ++w) {
    total_evals += partial_evals[w];
    if (!has_partial[w]) continue;
    if (!have_best || read_better(partial[w], best)) {
      best = std::move(partial[w]);
      have_best = true;
    }
  }
  best.evaluations = total_evals;
  return best;
}

SolveReport finish_report(ReadResult best, std::string name, std::uint64_t seed, int reads,
                          std::optional<std::size_t> target_k, double wall_ms,
                          std::uint64_t evaluations) {
  SolveReport report;
  report.hamming_weight = hamming_weight(best.bits);
  report.constraint_satisfied = target_k && report.hamming_weight == *target_k;
  report.best_bits = std::move(best.bits);
  report.energy = best.energy;
  report.target_k = target_k;
  report.solver_name = std::move(name);
  report.seed = seed;
  report.trials = reads;
  report.evaluations = evaluations;
  report.wall_time_ms = wall_ms;
  return report;
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point start_ = clock::now();
};

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Backend backend_from_name(const std::string& name) {
  if (name == "exhaustive") return Backend::Exhaustive;
  if (name == "sa") return Backend::SimulatedAnnealing;
  if (name == "tabu") return Backend::TabuSearch;
  if (name == "baseline") return Backend::RandomBaseline;
  fail(ErrorClass::Parse, "unknown solver '" + name + "' (expected exhaustive|sa|tabu|baseline)");
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Exhaustive: return "exhaustive";
    case Backend::SimulatedAnnealing: return "sa";
    case Backend::TabuSearch: return "tabu";
    case Backend::RandomBaseline: return "baseline";
  }
  return "?";
}

void SolverConfig::validate() const {
  require(num_reads >= 1, ErrorClass::InvalidArgument, "num_reads must be >= 1");
  require(sa.sweeps >= 1, ErrorClass::InvalidArgument, "sweeps must be >= 1");
  if (sa.t_max && sa.t_min) {
    require(*sa.t_max >= *sa.t_min && *sa.t_min > 0.0, ErrorClass::InvalidArgument,
            "need t_max >= t_min > 0");
  }
  if (tabu.tenure) require(*tabu.tenure >= 1, ErrorClass::InvalidArgument, "tenure must be >= 1");
  if (tabu.max_iters)
    require(*tabu.max_iters >= 1, ErrorClass::InvalidArgument, "max_iters must be >= 1");
}

SolveReport solve_exhaustive(const QuboModel& model, std::optional<std::size_t> target_k) {
  const std::size_t n = model.num_vars();
  require(n <= kExhaustiveGuard, ErrorClass::LimitExceeded,
          "exhaustive enumeration is guarded at " + std::to_string(kExhaustiveGuard) +
              " variables; got " + std::to_string(n));
  Stopwatch timer;
  const DenseView view(model);
  const std::uint64_t total = 1ULL << n;

  Bits x(n, 0);
  std::vector<double> deltas(n);
  view.fill_deltas(x, deltas);
  double energy = view.offset;  // all-zeros state, exact

  // Bitstring value with index 0 as MSB; fits in 64 bits under the guard.
  std::uint64_t value = 0;
  Bits best = x;
  double best_energy = energy;
  std::uint64_t best_value = 0;

  for (std::uint64_t step = 1; step < total; ++step) {
    const auto i = static_cast<std::size_t>(std::countr_zero(step));  // Gray-code flip
    energy += deltas[i];
    const double move = x[i] ? -1.0 : 1.0;
    x[i] = static_cast<std::uint8_t>(1 - x[i]);
    deltas[i] = -deltas[i];
    const double* row = view.couple.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) deltas[j] += (x[j] ? -1.0 : 1.0) * row[j] * move;
    }
    value ^= 1ULL << (n - 1 - i);
    if (energy < best_energy || (energy == best_energy && value < best_value)) {
      best = x;
      best_energy = energy;
      best_value = value;
    }
  }
  ReadResult result{std::move(best), 0.0, total};
  result.energy = view.energy(result.bits);  // exact, drift-free
  return finish_report(std::move(result), "exhaustive", 0, 1, target_k, timer.ms(), total);
}

SolveReport solve_sa(const QuboModel& model, const SolverConfig& config) {
  config.validate();
  Stopwatch timer;
  const DenseView view(model);
  const double t_max = config.sa.t_max.value_or(detail::default_t_max(model));
  const double t_min = config.sa.t_min.value_or(1e-3 * t_max);
  require(t_max >= t_min && t_min > 0.0, ErrorClass::InvalidArgument, "need t_max >= t_min > 0");
  auto read_fn = [&](int r) {
    return sa_read(view, derive_seed(config.seed, static_cast<std::uint64_t>(r)), t_max, t_min,
                   config.sa.sweeps, nullptr);
  };
  ReadResult best = best_of_reads(config.num_reads, config.threads, read_fn);
  const std::uint64_t evals = static_cast<std::uint64_t>(config.num_reads) *
                              static_cast<std::uint64_t>(config.sa.sweeps) * view.n;
  return finish_report(std::move(best), "sa", config.seed, config.num_reads, config.target_k,
                       timer.ms(), evals);
}

SolveReport solve_tabu(const QuboModel& model, const SolverConfig& config) {
  config.validate();
  Stopwatch timer;
  const DenseView view(model);
  const int n = static_cast<int>(view.n);
  const int tenure = config.tabu.tenure.value_or(std::max(4, n / 10));
  const int max_iters = config.tabu.max_iters.value_or(20 * n);
  auto read_fn = [&](int r) {
    return tabu_read(view, derive_seed(config.seed, static_cast<std::uint64_t>(r)), tenure,
                     max_iters, TabuTracker{});
  };
  ReadResult best = best_of_reads(config.num_reads, config.threads, read_fn);
  const std::uint64_t evals =
      static_cast<std::uint64_t>(config.num_reads) * static_cast<std::uint64_t>(max_iters);
  return finish_report(std::move(best), "tabu", config.seed, config.num_reads, config.target_k,
                       timer.ms(), evals);
}

SolveReport solve_random_baseline(const QuboModel& model, const SolverConfig& config) {
  config.validate();
  Stopwatch timer;
  const DenseView view(model);
  require(config.baseline.k <= view.n, ErrorClass::InvalidArgument,
          "baseline k " + std::to_string(config.baseline.k) + " exceeds num_vars " +
              std::to_string(view.n));
  auto read_fn = [&](int r) {
    return baseline_read(view, derive_seed(config.seed, static_cast<std::uint64_t>(r)),
                         config.baseline.k);
  };
  ReadResult best = best_of_reads(config.num_reads, config.threads, read_fn);
  return finish_report(std::move(best), "baseline", config.seed, config.num_reads,
                       config.target_k, timer.ms(),
                       static_cast<std::uint64_t>(config.num_reads));
}

SolveReport solve(const QuboModel& model, const SolverConfig& config) {
  switch (config.backend) {
    case Backend::Exhaustive: return solve_exhaustive(model, config.target_k);
    case Backend::SimulatedAnnealing: return solve_sa(model, config);
    case Backend::TabuSearch: return solve_tabu(model, config);
    case Backend::RandomBaseline: return solve_random_baseline(model, config);
  }
  fail(ErrorClass::InvalidArgument, "unknown backend");
}

TrialBatch run_trials(const QuboModel& model, const SolverConfig& config, int trials,
                      std::size_t k) {
  require(trials >= 1, ErrorClass::InvalidArgument, "trials must be >= 1");
  TrialBatch batch;
  batch.k = k;
  batch.reports.resize(static_cast<std::size_t>(trials));

  auto run_one = [&](int t) {
    SolverConfig trial_config = config;
    trial_config.seed = derive_seed(config.seed, kTrialStream + static_cast<std::uint64_t>(t));
    trial_config.target_k = k;
    trial_config.threads = 1;  // parallelism lives at the trial level here
    batch.reports[static_cast<std::size_t>(t)] = solve(model, trial_config);
  };

  if (config.threads <= 1 || trials < 4) {
    for (int t = 0; t < trials; ++t) run_one(t);
  } else {
    const unsigned workers = std::min<unsigned>(config.threads, static_cast<unsigned>(trials));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int t = static_cast<int>(w); t < trials; t += static_cast<int>(workers)) run_one(t);
      });
    }
    for (auto& t : pool) t.join();
  }

  double mean = 0.0;
  std::size_t satisfied = 0;
  for (const auto& r : batch.reports) {
    mean += r.energy;
    satisfied += r.constraint_satisfied ? 1 : 0;
  }
  mean /= static_cast<double>(trials);
  double var = 0.0;
  for (const auto& r : batch.reports) {
    const double d = r.energy - mean;
    var += d * d;
  }
  batch.mean_energy = mean;
  batch.std_energy = std::sqrt(var / static_cast<double>(trials));
  batch.satisfied_fraction = static_cast<double>(satisfied) / static_cast<double>(trials);
  return batch;
}

namespace {

nlohmann::ordered_json report_json(const SolveReport& r) {
  nlohmann::ordered_json doc;
  doc["solver"] = r.solver_name;
  doc["seed"] = r.seed;
  doc["best_bits"] = bits_to_string(r.best_bits);
  doc["energy"] = r.energy;
  doc["hamming_weight"] = r.hamming_weight;
  if (r.target_k) {
    doc["target_k"] = *r.target_k;
    doc["constraint_satisfied"] = r.constraint_satisfied;
  } else {
    doc["target_k"] = nullptr;
    doc["constraint_satisfied"] = nullptr;
  }
  doc["reads"] = r.trials;
  doc["evaluations"] = r.evaluations;
  return doc;
}

}  // namespace

std::string report_to_json(const SolveReport& report) { return report_json(report).dump(2) + "\n"; }

std::string trial_batch_to_json(const TrialBatch& batch) {
  nlohmann::ordered_json doc;
  doc["k"] = batch.k;
  doc["trials"] = batch.reports.size();
  doc["satisfied_fraction"] = batch.satisfied_fraction;
  doc["mean_energy"] = batch.mean_energy;
  doc["std_energy"] = batch.std_energy;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : batch.reports) arr.push_back(report_json(r));
  doc["reports"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string trial_batch_to_csv(const TrialBatch& batch) {
  std::ostringstream out;
  out << "trial,solver,seed,energy,hamming_weight,constraint_satisfied,best_bits\n";
  for (std::size_t t = 0; t < batch.reports.size(); ++t) {
    const auto& r = batch.reports[t];
    out << t << "," << r.solver_name << "," << r.seed << "," << format_double(r.energy) << ","
        << r.hamming_weight << "," << (r.constraint_satisfied ? 1 : 0) << ","
        << bits_to_string(r.best_bits) << "\n";
  }
  return out.str();
}

namespace detail {

double default_t_max(const QuboModel& model) {
  const DenseView view(model);
  // Pure function of the model: fixed stream keyed on size and coefficients'
  // magnitude, not on any caller seed.
  auto rng = make_rng(derive_seed(0x7E3A11CE5CA1EULL, view.n));
  double t_max = 0.0;
  std::vector<double> deltas(view.n);
  for (int s = 0; s < 100; ++s) {
    Bits x = random_bits(rng, view.n);
    view.fill_deltas(x, deltas);
    for (const double d : deltas) t_max = std::max(t_max, std::abs(d));
  }
  return std::max(t_max, 1e-9);
}

SaStats sa_read_stats(const QuboModel& model, std::uint64_t seed, double t_max, double t_min,
                      int sweeps) {
  const DenseView view(model);
  SaStats stats;
  sa_read(view, seed, t_max, t_min, sweeps, &stats);
  return stats;
}

std::vector<TabuTraceStep> tabu_read_trace(const QuboModel& model, std::uint64_t seed, int tenure,
                                           int max_iters) {
  const DenseView view(model);
  std::vector<TabuTraceStep> steps;
  TabuTracker tracker{&steps};
  tabu_read(view, seed, tenure, max_iters, tracker);
  return steps;
}

}  // namespace detail

}  // namespace selector
