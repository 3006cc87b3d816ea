#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pird/pird.hpp"

namespace pird {

/// Applies one uniformly random permutation of the time index to every
/// channel. Destroys temporal structure, keeps the zero-lag covariance.
TimeSeriesSet shuffle_surrogate(const TimeSeriesSet& series, std::uint64_t seed);

/// Seed of the k-th surrogate, derived from the master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k);

/// Linear-interpolation percentile, q in [0, 100].
double percentile(std::vector<double> values, double q);

struct SignificanceOptions {
  int n_surrogates = 100;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int max_order = 20;
  int grid_points = kDefaultGridPoints;
  std::optional<Band> band;
};

struct QuantityTest {
  std::string name;  // joint_mir, R, U1, ..., S
  double original = 0.0;
  double lower = 0.0;  // alpha/2 percentile of the surrogates
  double upper = 0.0;  // 1 − alpha/2 percentile
  bool significant = false;
  std::vector<double> surrogates;
};

struct SignificanceReport {
  SignificanceOptions options;
  int original_order = 0;
  std::vector<int> surrogate_orders;
  int failed = 0;
  std::vector<std::string> failures;
  std::vector<QuantityTest> quantities;

  const QuantityTest& quantity(const std::string& name) const;
};

/// Fits a VAR (AIC order) to the data and to each shuffle surrogate,
/// decomposes all of them and flags quantities whose original value falls
/// outside the surrogate percentile band. The VAR order is re-selected for
/// every surrogate.
SignificanceReport significance(const TimeSeriesSet& series, Index target,
                                std::vector<Index> sources,
                                const SignificanceOptions& options = {});

}  // namespace pird
