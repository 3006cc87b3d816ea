#include "pird/pird.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "pird/errors.hpp"

namespace pird {

namespace {

void validate_roles(Index dim, Index target, const std::vector<Index>& sources) {
  if (target < 0 || target >= dim) {
    throw SizeError("target index " + std::to_string(target) + " outside 0.." +
                    std::to_string(dim - 1));
  }
  if (sources.empty()) throw SizeError("at least one source is required");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Index s = sources[i];
    if (s < 0 || s >= dim) {
      throw SizeError("source index " + std::to_string(s) + " outside 0.." +
                      std::to_string(dim - 1));
    }
    if (s == target) throw SizeError("target must not be one of the sources");
    if (std::find(sources.begin(), sources.begin() + i, s) != sources.begin() + i) {
      throw SizeError("duplicate source index " + std::to_string(s));
    }
  }
}

/// Fills atom_rates, joint/marginal values and residuals from cumulative_rates.
void finish(Decomposition& d) {
  const auto& lat = d.lattice;
  d.atom_rates = moebius_invert(lat, d.cumulative_rates);
  d.joint_mir = d.cumulative_rates[lat.top()];
  const int n = lat.n_sources();
  d.marginal_mirs.resize(n);
  for (int i = 1; i <= n; ++i) d.marginal_mirs[i - 1] = d.cumulative_rates[lat.singleton(i)];

  double total = 0.0;
  for (double v : d.atom_rates) total += v;
  d.residual_joint = std::abs(total - d.joint_mir);
  d.residual_marginal = 0.0;
  for (int i = 1; i <= n; ++i) {
    const std::size_t s = lat.singleton(i);
    double acc = d.atom_rates[s];
    for (std::size_t j : lat.strict_down_set(s)) acc += d.atom_rates[j];
    d.residual_marginal =
        std::max(d.residual_marginal, std::abs(acc - d.marginal_mirs[i - 1]));
  }
  if (!std::isfinite(total) ||
      !(d.residual_joint <= kConsistencyTolerance) ||
      !(d.residual_marginal <= kConsistencyTolerance)) {
    throw ConsistencyError("decomposition residuals exceed tolerance (joint " +
                           std::to_string(d.residual_joint) + ", marginal " +
                           std::to_string(d.residual_marginal) + ")");
  }
  if (d.null_atoms.size() != lat.size()) d.null_atoms.assign(lat.size(), false);
}

}  // namespace

std::vector<Index> group_channels(SourceSet group, std::span<const Index> sources) {
  std::vector<Index> out;
  for (int m : group.members()) {
    if (m > static_cast<int>(sources.size())) {
      throw SizeError("source group " + group.to_string() +
                      " refers to a missing source");
    }
    out.push_back(sources[m - 1]);
  }
  // Sorted so a group's log-dets do not depend on the source order.
  std::sort(out.begin(), out.end());
  return out;
}

double spectral_redundancy(const SpectralDensity& spec, const Atom& atom,
                           std::span<const Index> sources, Index target,
                           std::size_t omega_index) {
  double best = std::numeric_limits<double>::infinity();
  for (SourceSet g : atom.groups()) {
    const auto channels = group_channels(g, sources);
    best = std::min(best, spectral_mir(spec, channels, target, omega_index));
  }
  return best;
}

PirdResult decompose(const VarModel& model, Index target,
                     std::vector<Index> sources, const FrequencyGrid& grid,
                     std::optional<Band> band) {
  validate_roles(model.dim(), target, sources);
  return decompose(var_to_spectrum(model, grid), target, std::move(sources), band);
}

PirdResult decompose(const SpectralDensity& spec, Index target,
                     std::vector<Index> sources, std::optional<Band> band) {
  validate_roles(spec.dim(), target, sources);
  PirdResult r;
  r.lattice = enumerate_atoms(static_cast<int>(sources.size()));
  r.target = target;
  r.sources = sources;
  r.grid = spec.grid();
  r.band = band;

  const std::size_t n_freq = spec.size();
  const std::uint32_t n_masks = (1u << sources.size()) - 1;
  std::vector<std::vector<double>> by_mask(n_masks + 1);
  for (std::uint32_t mask = 1; mask <= n_masks; ++mask) {
    by_mask[mask] = spectral_mir_profile(
        spec, group_channels(SourceSet::from_mask(mask), sources), target);
  }

  const auto& lat = r.lattice;
  r.spectral_profiles.resize(lat.size());
  r.cumulative_rates.resize(lat.size());
  for (std::size_t a = 0; a < lat.size(); ++a) {
    std::vector<double> profile(n_freq, std::numeric_limits<double>::infinity());
    for (SourceSet g : lat.atom(a).groups()) {
      const auto& gp = by_mask[g.mask()];
      for (std::size_t k = 0; k < n_freq; ++k) profile[k] = std::min(profile[k], gp[k]);
    }
    r.cumulative_rates[a] = integrate(profile, r.grid, band);
    r.spectral_profiles[a] = std::move(profile);
  }

  r.atom_profiles.assign(lat.size(), std::vector<double>(n_freq));
  std::vector<double> column(lat.size());
  for (std::size_t k = 0; k < n_freq; ++k) {
    for (std::size_t a = 0; a < lat.size(); ++a) column[a] = r.spectral_profiles[a][k];
    const auto partial = moebius_invert(lat, column);
    for (std::size_t a = 0; a < lat.size(); ++a) r.atom_profiles[a][k] = partial[a];
  }
  r.null_atoms.resize(lat.size());
  for (std::size_t a = 0; a < lat.size(); ++a) {
    const auto& ap = r.atom_profiles[a];
    r.null_atoms[a] = std::all_of(ap.begin(), ap.end(), [](double v) {
      return std::abs(v) < kNullProfileThreshold;
    });
  }

  finish(r);
  return r;
}

double gaussian_mi(const MatrixXd& covariance, std::span<const Index> group_a,
                   std::span<const Index> group_b) {
  auto sub = [&](std::span<const Index> idx) {
    const Index n = static_cast<Index>(idx.size());
    MatrixXcd out(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) out(i, j) = covariance(idx[i], idx[j]);
    }
    return out;
  };
  std::vector<Index> joint(group_a.begin(), group_a.end());
  joint.insert(joint.end(), group_b.begin(), group_b.end());
  try {
    return 0.5 * (hermitian_log_det(sub(group_a)) + hermitian_log_det(sub(group_b)) -
                  hermitian_log_det(sub(joint)));
  } catch (const DegenerateSpectrumError& e) {
    throw NumericalError(std::string("singular covariance: ") + e.what());
  }
}

Decomposition static_decomposition(const MatrixXd& covariance, Index target,
                                   std::vector<Index> sources) {
  if (covariance.rows() != covariance.cols()) {
    throw SizeError("covariance must be square");
  }
  validate_roles(covariance.rows(), target, sources);
  Decomposition d;
  d.lattice = enumerate_atoms(static_cast<int>(sources.size()));
  d.target = target;
  d.sources = sources;

  const Index y[] = {target};
  std::map<std::uint32_t, double> by_mask;
  for (std::uint32_t mask = 1; mask < (1u << sources.size()); ++mask) {
    by_mask[mask] =
        gaussian_mi(covariance, group_channels(SourceSet::from_mask(mask), sources), y);
  }
  d.cumulative_rates.resize(d.lattice.size());
  for (std::size_t a = 0; a < d.lattice.size(); ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (SourceSet g : d.lattice.atom(a).groups()) best = std::min(best, by_mask[g.mask()]);
    d.cumulative_rates[a] = best;
  }
  finish(d);
  return d;
}

PirdSummary static_pid(const MatrixXd& covariance, Index target,
                       std::vector<Index> sources) {
  return summarize(static_decomposition(covariance, target, std::move(sources)));
}

PirdSummary summarize(const Decomposition& result) {
  const auto& lat = result.lattice;
  const int n = lat.n_sources();
  auto value = [&](std::size_t a) {
    return result.null_atoms.size() == lat.size() && result.null_atoms[a]
               ? 0.0
               : result.atom_rates[a];
  };

  PirdSummary s;
  s.joint = result.joint_mir;
  s.unique.assign(n, 0.0);
  if (n == 1) {
    s.unique[0] = value(0);
    s.convention = "single source: U1 is the joint rate";
    return s;
  }
  s.redundancy = value(lat.bottom());
  for (int i = 1; i <= n; ++i) s.unique[i - 1] = value(lat.singleton(i));
  for (std::size_t a = 0; a < lat.size(); ++a) {
    if (a == lat.bottom()) continue;
    const auto& groups = lat.atom(a).groups();
    if (groups.size() == 1 && groups[0].size() == 1) continue;
    const bool all_joint = std::all_of(groups.begin(), groups.end(),
                                       [](SourceSet g) { return g.size() >= 2; });
    (all_joint ? s.synergy : s.other) += value(a);
  }
  s.convention =
      n == 2 ? "R={1}{2}, U_i={i}, S={12}"
             : "non-canonical coarse graining: R=bottom atom, U_i={i}, "
               "S=sum of atoms whose groups all have >=2 sources, "
               "other=remaining atoms";
  return s;
}

ConservativenessReport conservativeness_check(const PirdResult& result,
                                              const VarModel& model, int max_lag,
                                              double tolerance,
                                              double singleton_rel_tol) {
  const auto& lat = result.lattice;
  const Index y[] = {result.target};
  std::map<std::uint32_t, double> oracle;
  for (std::uint32_t mask = 1; mask < (1u << result.sources.size()); ++mask) {
    const auto g = group_channels(SourceSet::from_mask(mask), result.sources);
    oracle[mask] = time_domain_mir_oracle(model, g, y, max_lag).rate;
  }
  const bool full_band =
      !result.band || (result.band->lo <= 0.0 && result.band->hi >= std::numbers::pi);

  ConservativenessReport report;
  for (std::size_t a = 0; a < lat.size(); ++a) {
    ConservativenessEntry e;
    e.atom = a;
    e.redundancy_rate = result.cumulative_rates[a];
    e.min_group_rate = std::numeric_limits<double>::infinity();
    for (SourceSet g : lat.atom(a).groups()) {
      e.min_group_rate = std::min(e.min_group_rate, oracle[g.mask()]);
    }
    e.singleton = lat.atom(a).groups().size() == 1;
    e.holds = e.redundancy_rate <= e.min_group_rate + tolerance;
    if (e.singleton && full_band) {
      const double gap = std::abs(e.redundancy_rate - e.min_group_rate);
      const double scale = std::max(std::abs(e.min_group_rate), 1e-12);
      report.max_singleton_gap = std::max(report.max_singleton_gap,
                                          gap <= tolerance ? 0.0 : gap / scale);
      e.holds = e.holds && gap <= singleton_rel_tol * scale + tolerance;
    }
    if (!e.holds) ++report.violations;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace pird
