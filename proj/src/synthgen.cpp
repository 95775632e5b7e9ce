#include "selector/synthgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include "selector/errors.hpp"
#include "selector/rng.hpp"

namespace selector {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double gaussian(std::mt19937_64& rng, double mean, double std) {
  std::normal_distribution<double> dist(mean, std);
  return dist(rng);
}

}  // namespace

ParamSampler ParamSampler::uniform(double lo, double hi) {
  require(lo < hi, ErrorClass::InvalidArgument, "uniform sampler needs lo < hi");
  ParamSampler s;
  s.kind = Kind::Uniform;
  s.lo = lo;
  s.hi = hi;
  return s;
}

ParamSampler ParamSampler::gaussian(double mean, double std) {
  require(std >= 0.0, ErrorClass::InvalidArgument, "gaussian sampler needs std >= 0");
  ParamSampler s;
  s.kind = Kind::Gaussian;
  s.mean = mean;
  s.std = std;
  return s;
}

namespace {

double draw_param(std::mt19937_64& rng, const ParamSampler& s) {
  if (s.kind == ParamSampler::Kind::Uniform) return s.lo + (s.hi - s.lo) * uniform01(rng);
  return gaussian(rng, s.mean, s.std);
}

}  // namespace

LabeledData gen_blobs(const BlobSpec& spec) {
  require(!spec.centers.empty(), ErrorClass::InvalidArgument, "need at least one blob center");
  require(spec.points_per_blob >= 1, ErrorClass::InvalidArgument, "points_per_blob must be >= 1");
  require(spec.std_dev > 0.0, ErrorClass::InvalidArgument, "std_dev must be > 0");
  auto rng = make_rng(spec.seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::vector<int> classes;
  rows.reserve(spec.centers.size() * spec.points_per_blob);
  for (std::size_t c = 0; c < spec.centers.size(); ++c) {
    for (std::size_t p = 0; p < spec.points_per_blob; ++p) {
      rows.push_back({spec.centers[c][0] + gaussian(rng, 0.0, spec.std_dev),
                      spec.centers[c][1] + gaussian(rng, 0.0, spec.std_dev)});
      labels.push_back("blob" + std::to_string(c) + "_" + std::to_string(p));
      classes.push_back(static_cast<int>(c));
    }
  }
  return {DataMatrix(std::move(rows), std::move(labels)), std::move(classes)};
}

LabeledData gen_trig(const TrigSpec& spec) {
  require(spec.curves_per_class >= 1, ErrorClass::InvalidArgument, "curves_per_class must be >= 1");
  require(spec.num_samples >= 2, ErrorClass::InvalidArgument, "num_samples must be >= 2");
  require(spec.sigma >= 0.0, ErrorClass::InvalidArgument, "sigma must be >= 0");
  auto rng = make_rng(spec.seed);
  const std::size_t m = spec.num_samples;
  std::vector<double> grid(m);
  for (std::size_t i = 0; i < m; ++i)
    grid[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(m - 1);

  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::vector<int> classes;
  rows.reserve(2 * spec.curves_per_class);
  for (int cls = 0; cls < 2; ++cls) {
    for (std::size_t c = 0; c < spec.curves_per_class; ++c) {
      std::vector<double> row(m);
      for (std::size_t i = 0; i < m; ++i) {
        const double base = cls == 0 ? std::sin(grid[i]) : std::cos(grid[i]);
        row[i] = spec.sigma > 0.0 ? base + gaussian(rng, 0.0, spec.sigma) : base;
      }
      rows.push_back(std::move(row));
      labels.push_back((cls == 0 ? "sin_" : "cos_") + std::to_string(c));
      classes.push_back(cls);
    }
  }
  return {DataMatrix(std::move(rows), std::move(labels)), std::move(classes)};
}

namespace {

void check_sde_spec(const SdeSpec& spec) {
  require(spec.dims >= 1, ErrorClass::InvalidArgument, "dims must be >= 1");
  require(spec.mu.size() == spec.dims, ErrorClass::InvalidArgument, "mu must have dims entries");
  require(spec.sigma.size() == spec.dims * spec.dims, ErrorClass::InvalidArgument,
          "sigma must be a dims x dims matrix");
  require(spec.x0.size() == spec.dims, ErrorClass::InvalidArgument, "x0 must have dims entries");
  for (const double v : spec.x0)
    require(v > 0.0, ErrorClass::InvalidArgument, "x0 entries must be > 0");
  require(spec.dt > 0.0, ErrorClass::InvalidArgument, "dt must be > 0");
  require(spec.steps >= 1, ErrorClass::InvalidArgument, "steps must be >= 1");
}

/// One Euler-Maruyama path set; rows[i] holds dimension i over steps+1 times.
std::vector<std::vector<double>> sde_paths(const SdeSpec& spec, std::mt19937_64& rng) {
  const std::size_t d = spec.dims;
  std::vector<std::vector<double>> rows(d, std::vector<double>(spec.steps + 1));
  std::vector<double> x = spec.x0;
  for (std::size_t i = 0; i < d; ++i) rows[i][0] = x[i];
  const double sqrt_dt = std::sqrt(spec.dt);
  std::vector<double> dw(d);
  for (std::size_t t = 1; t <= spec.steps; ++t) {
    for (std::size_t j = 0; j < d; ++j) dw[j] = gaussian(rng, 0.0, 1.0) * sqrt_dt;
    for (std::size_t i = 0; i < d; ++i) {
      double shock = 0.0;
      for (std::size_t j = 0; j < d; ++j) shock += spec.sigma[i * d + j] * dw[j];
      x[i] = x[i] * (1.0 + spec.mu[i] * spec.dt + shock);
      rows[i][t] = x[i];
    }
  }
  return rows;
}

}  // namespace

LabeledData gen_sde(const SdeSpec& spec) {
  check_sde_spec(spec);
  require(spec.dims >= 2, ErrorClass::InvalidArgument,
          "gen_sde needs dims >= 2 to form a data matrix");
  auto rng = make_rng(spec.seed);
  auto rows = sde_paths(spec, rng);
  std::vector<std::string> labels;
  std::vector<int> classes;
  for (std::size_t i = 0; i < spec.dims; ++i) {
    labels.push_back("dim" + std::to_string(i));
    classes.push_back(static_cast<int>(i));
  }
  return {DataMatrix(std::move(rows), std::move(labels)), std::move(classes)};
}

SdePopulation gen_sde_population(const SdeSpec& base, std::size_t num_realizations,
                                 const ParamSampler& sampler) {
  require(num_realizations >= 1, ErrorClass::InvalidArgument, "num_realizations must be >= 1");
  SdeSpec spec = base;
  spec.mu.assign(base.dims, 0.0);
  spec.sigma.assign(base.dims * base.dims, 0.0);
  check_sde_spec(spec);

  const std::size_t d = base.dims;
  std::vector<std::vector<std::vector<double>>> realizations(num_realizations);
  std::vector<std::vector<double>> drawn(num_realizations);
  for (std::size_t r = 0; r < num_realizations; ++r) {
    auto rng = make_rng(derive_seed(base.seed, r));
    for (std::size_t i = 0; i < d; ++i) spec.mu[i] = draw_param(rng, sampler);
    for (std::size_t ij = 0; ij < d * d; ++ij) spec.sigma[ij] = draw_param(rng, sampler);
    drawn[r] = spec.mu;
    drawn[r].insert(drawn[r].end(), spec.sigma.begin(), spec.sigma.end());
    realizations[r] = sde_paths(spec, rng);
  }

  // Cluster c collects dimension c of every realization.
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::vector<int> classes;
  rows.reserve(d * num_realizations);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < num_realizations; ++r) {
      rows.push_back(std::move(realizations[r][c]));
      labels.push_back("c" + std::to_string(c) + "_r" + std::to_string(r));
      classes.push_back(static_cast<int>(c));
    }
  }
  return {{DataMatrix(std::move(rows), std::move(labels)), std::move(classes)}, std::move(drawn)};
}

}  // namespace selector
