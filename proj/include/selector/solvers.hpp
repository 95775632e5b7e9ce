#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selector/qubo.hpp"

namespace selector {

enum class Backend { Exhaustive, SimulatedAnnealing, TabuSearch, RandomBaseline };

Backend backend_from_name(const std::string& name);
std::string backend_name(Backend b);

struct SaParams {
  std::optional<double> t_max;  // default: per-model auto scale
  std::optional<double> t_min;  // default: 1e-3 * t_max
  int sweeps = 100;             // one sweep = n proposed flips in random order
};

struct TabuParams {
  std::optional<int> tenure;     // default: max(4, n/10)
  std::optional<int> max_iters;  // default: 20 * n
};

struct BaselineParams {
  std::size_t k = 0;  // Hamming weight of every sampled state
};

struct SolverConfig {
  Backend backend = Backend::SimulatedAnnealing;
  std::uint64_t seed = 0;
  int num_reads = 1000;  // independent restarts per solve
  SaParams sa;
  TabuParams tabu;
  BaselineParams baseline;
  std::optional<std::size_t> target_k;  // constraint check, when known
  unsigned threads = 1;

  void validate() const;
};

struct SolveReport {
  Bits best_bits;
  double energy = 0.0;
  std::size_t hamming_weight = 0;
  bool constraint_satisfied = false;
  std::optional<std::size_t> target_k;
  std::string solver_name;
  std::uint64_t seed = 0;
  int trials = 1;                 // restarts/reads performed
  std::uint64_t evaluations = 0;  // states visited / proposals / samples
  double wall_time_ms = 0.0;      // in-memory only; never serialized
};

struct TrialBatch {
  std::vector<SolveReport> reports;
  std::size_t k = 0;
  double satisfied_fraction = 0.0;
  double mean_energy = 0.0;
  double std_energy = 0.0;  // population standard deviation over trials
};

/// Global minimum by full enumeration (Gray-code incremental); guarded at
/// num_vars <= 30. Ties resolve to the lowest bitstring read as a binary
/// number with index 0 as the most significant bit.
SolveReport solve_exhaustive(const QuboModel& model,
                             std::optional<std::size_t> target_k = std::nullopt);

/// Simulated annealing: num_reads independent restarts, geometric temperature
/// schedule, Metropolis acceptance, single-bit-flip moves with incremental
/// energy deltas. Deterministic for a fixed seed, for any thread count.
SolveReport solve_sa(const QuboModel& model, const SolverConfig& config);

/// Tabu search: single-bit-flip with tenure and best-so-far aspiration,
/// num_reads random restarts. Deterministic for a fixed seed.
SolveReport solve_tabu(const QuboModel& model, const SolverConfig& config);

/// Best of num_reads uniformly random Hamming-weight-k states.
SolveReport solve_random_baseline(const QuboModel& model, const SolverConfig& config);

/// Dispatch on config.backend.
SolveReport solve(const QuboModel& model, const SolverConfig& config);

/// Repeats the configured solve `trials` times with per-trial derived seeds
/// and aggregates constraint-satisfaction and energy statistics.
TrialBatch run_trials(const QuboModel& model, const SolverConfig& config, int trials,
                      std::size_t k);

std::string report_to_json(const SolveReport& report);
std::string trial_batch_to_json(const TrialBatch& batch);
std::string trial_batch_to_csv(const TrialBatch& batch);

namespace detail {

/// Instrumentation hooks used by property tests.
struct SaStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  std::uint64_t uphill_accepts = 0;  // accepted moves with dE > 0
};

SaStats sa_read_stats(const QuboModel& model, std::uint64_t seed, double t_max, double t_min,
                      int sweeps);

struct TabuTraceStep {
  double chosen_delta = 0.0;
  bool chosen_was_tabu = false;
  bool had_aspirating_tabu = false;   // some tabu move strictly improved best
  double best_aspirating_delta = 0.0; // min delta among those, when present
};

std::vector<TabuTraceStep> tabu_read_trace(const QuboModel& model, std::uint64_t seed, int tenure,
                                           int max_iters);

/// Auto temperature scale: max |single-flip energy change| over 100 random
/// states (fixed internal stream, a pure function of the model).
double default_t_max(const QuboModel& model);

}  // namespace detail

}  // namespace selector
