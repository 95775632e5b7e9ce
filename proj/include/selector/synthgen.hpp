#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "selector/data_matrix.hpp"

namespace selector {

/// A generated dataset together with the integer class/cluster of each row
/// (row labels carry the same information as readable strings).
struct LabeledData {
  DataMatrix data;
  std::vector<int> classes;
};

/// Isotropic 2-D Gaussian blobs around the given centers.
struct BlobSpec {
  std::vector<std::array<double, 2>> centers;
  std::size_t points_per_blob = 90;
  double std_dev = 2.0;
  std::uint64_t seed = 0;
};

/// Noisy sine/cosine curves on a shared uniform grid over [0, 2*pi]
/// (both endpoints included); class 0 = sine, class 1 = cosine.
struct TrigSpec {
  std::size_t curves_per_class = 50;
  std::size_t num_samples = 100;
  double sigma = 0.0;  // Gaussian noise standard deviation, >= 0
  std::uint64_t seed = 0;
};

/// Coupled geometric SDE, Euler-Maruyama discretization:
///   x_i(t+dt) = x_i(t) * (1 + mu_i dt + sum_j sigma_ij dW_j),  dW_j ~ N(0, dt)
struct SdeSpec {
  std::size_t dims = 2;
  std::vector<double> mu;     // drift, length dims
  std::vector<double> sigma;  // volatility matrix, row-major dims x dims
  std::vector<double> x0;     // initial values > 0, length dims
  double dt = 1.0 / 253.0;
  std::size_t steps = 253;
  std::uint64_t seed = 0;
};

/// Distribution the per-realization SDE parameters are drawn from.
struct ParamSampler {
  enum class Kind { Uniform, Gaussian };
  Kind kind = Kind::Uniform;
  double lo = -1.0, hi = 1.0;      // Uniform bounds
  double mean = -1.0, std = 1.0;   // Gaussian parameters

  static ParamSampler uniform(double lo = -1.0, double hi = 1.0);
  static ParamSampler gaussian(double mean, double std);
};

LabeledData gen_blobs(const BlobSpec& spec);

LabeledData gen_trig(const TrigSpec& spec);

/// One realization; dims rows (one series per dimension), steps+1 columns.
LabeledData gen_sde(const SdeSpec& spec);

struct SdePopulation {
  LabeledData dataset;
  /// Parameters drawn for each realization (mu then sigma, flattened).
  std::vector<std::vector<double>> drawn_params;
};

/// num_realizations coupled realizations; rows are grouped by dimension
/// (cluster c holds realization series of dimension c), labels c{c}_r{r}.
/// mu/sigma of `base` are ignored; each realization draws fresh parameters
/// from the sampler.
SdePopulation gen_sde_population(const SdeSpec& base, std::size_t num_realizations,
                                 const ParamSampler& sampler);

}  // namespace selector
