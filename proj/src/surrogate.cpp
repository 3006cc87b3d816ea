#include "pird/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pird/errors.hpp"

namespace pird {

TimeSeriesSet shuffle_surrogate(const TimeSeriesSet& series, std::uint64_t seed) {
  const Index n = series.n_samples();
  if (n < 2) throw SizeError("shuffling needs at least 2 samples");
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  TimeSeriesSet out;
  out.labels = series.labels;
  out.samples.resize(n, series.n_channels());
  for (Index t = 0; t < n; ++t) out.samples.row(t) = series.samples.row(perm[t]);
  if (static_cast<Index>(series.phases.size()) == n) {
    out.phases.resize(n);
    for (Index t = 0; t < n; ++t) out.phases[t] = series.phases[perm[t]];
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw SizeError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 100.0)) throw RangeError("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const QuantityTest& SignificanceReport::quantity(const std::string& name) const {
  for (const auto& q : quantities) {
    if (q.name == name) return q;
  }
  throw IncompleteInputError("no quantity named " + name + " in report");
}

namespace {

std::vector<double> flatten(const PirdSummary& s) {
  std::vector<double> v{s.joint, s.redundancy};
  v.insert(v.end(), s.unique.begin(), s.unique.end());
  v.push_back(s.synergy);
  if (s.unique.size() > 2) v.push_back(s.other);
  return v;
}

struct FittedSummary {
  int order;
  PirdSummary summary;
};

FittedSummary fit_and_decompose(const TimeSeriesSet& series, Index target,
                                const std::vector<Index>& sources,
                                const SignificanceOptions& options,
                                const FrequencyGrid& grid) {
  const int order = select_order(series, options.max_order);
  const VarModel model = estimate(series, order);
  return {order, summarize(decompose(model, target, sources, grid, options.band))};
}

}  // namespace

SignificanceReport significance(const TimeSeriesSet& series, Index target,
                                std::vector<Index> sources,
                                const SignificanceOptions& options) {
  if (options.n_surrogates < 20) {
    throw RangeError("at least 20 surrogates are required");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw RangeError("alpha must lie in (0, 1)");
  }
  const FrequencyGrid grid(options.grid_points);

  SignificanceReport report;
  report.options = options;
  const auto original = fit_and_decompose(series, target, sources, options, grid);
  report.original_order = original.order;

  std::vector<std::string> names{"joint_mir", "R"};
  for (std::size_t i = 1; i <= sources.size(); ++i) names.push_back("U" + std::to_string(i));
  names.push_back("S");
  if (sources.size() > 2) names.push_back("other");

  const auto original_values = flatten(original.summary);
  report.quantities.resize(names.size());
  for (std::size_t q = 0; q < names.size(); ++q) {
    report.quantities[q].name = names[q];
    report.quantities[q].original = original_values[q];
  }

  for (int k = 0; k < options.n_surrogates; ++k) {
    try {
      const auto surrogate =
          shuffle_surrogate(series, derive_seed(options.seed, static_cast<std::uint64_t>(k)));
      const auto fitted = fit_and_decompose(surrogate, target, sources, options, grid);
      report.surrogate_orders.push_back(fitted.order);
      const auto values = flatten(fitted.summary);
      for (std::size_t q = 0; q < names.size(); ++q) {
        report.quantities[q].surrogates.push_back(values[q]);
      }
    } catch (const Error& e) {
      ++report.failed;
      report.failures.push_back("surrogate " + std::to_string(k) + ": " + e.what());
    }
  }
  if (report.failed == options.n_surrogates) {
    throw NumericalError("every surrogate failed; first error: " +
                         report.failures.front());
  }

  const double lo_q = 50.0 * options.alpha;
  const double hi_q = 100.0 - lo_q;
  for (auto& q : report.quantities) {
    q.lower = percentile(q.surrogates, lo_q);
    q.upper = percentile(q.surrogates, hi_q);
    q.significant = q.original < q.lower || q.original > q.upper;
  }
  return report;
}

}  // namespace pird
