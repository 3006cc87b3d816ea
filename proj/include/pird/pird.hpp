#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pird/lattice.hpp"
#include "pird/spectral.hpp"
#include "pird/var_model.hpp"

namespace pird {

/// Lattice decomposition of the information between one target and N
/// sources. Channel indices are 0-based; source i of the lattice (1-based)
/// is channel sources[i-1].
struct Decomposition {
  RedundancyLattice lattice{1};
  Index target = 0;
  std::vector<Index> sources;
  std::vector<double> cumulative_rates;  // I^∩ per atom
  std::vector<double> atom_rates;        // I^δ per atom
  double joint_mir = 0.0;
  std::vector<double> marginal_mirs;     // per source
  double residual_joint = 0.0;           // |Σ atoms − joint|
  double residual_marginal = 0.0;        // max_i |Σ_{β⪯{i}} atoms − marginal_i|
  /// Atoms reported as exactly zero in summaries.
  std::vector<bool> null_atoms;
};

struct PirdResult : Decomposition {
  FrequencyGrid grid;
  std::optional<Band> band;
  /// Spectral redundancy density i^∩(ω) per atom.
  std::vector<std::vector<double>> spectral_profiles;
  /// Pointwise Möbius inversion of spectral_profiles.
  std::vector<std::vector<double>> atom_profiles;
};

/// Coarse summary: redundancy, unique per source, synergy. For N > 2,
/// `other` collects atoms outside the three classes.
struct PirdSummary {
  double redundancy = 0.0;
  std::vector<double> unique;
  double synergy = 0.0;
  double other = 0.0;
  double joint = 0.0;
  std::string convention;
};

constexpr double kConsistencyTolerance = 1e-6;
constexpr double kNullProfileThreshold = 1e-14;

/// Group channels for each source group, mapping 1-based members onto
/// `sources`. The result is sorted by channel index.
std::vector<Index> group_channels(SourceSet group, std::span<const Index> sources);

/// min over the atom's groups of spectral_mir(group, target, ω).
double spectral_redundancy(const SpectralDensity& spec, const Atom& atom,
                           std::span<const Index> sources, Index target,
                           std::size_t omega_index);

/// Full PIRD of a VAR model: spectral profiles per atom, band integration,
/// Möbius inversion and consistency checks (ConsistencyError when a
/// residual exceeds kConsistencyTolerance).
PirdResult decompose(const VarModel& model, Index target,
                     std::vector<Index> sources,
                     const FrequencyGrid& grid = FrequencyGrid(),
                     std::optional<Band> band = std::nullopt);

/// Same, reusing an already computed spectrum.
PirdResult decompose(const SpectralDensity& spec, Index target,
                     std::vector<Index> sources,
                     std::optional<Band> band = std::nullopt);

/// Zero-lag Gaussian PID with minimum-MI redundancy.
Decomposition static_decomposition(const MatrixXd& covariance, Index target,
                                   std::vector<Index> sources);

PirdSummary static_pid(const MatrixXd& covariance, Index target,
                       std::vector<Index> sources);

PirdSummary summarize(const Decomposition& result);

/// ½ log(det Σ_A det Σ_B / det Σ_AB) for disjoint channel groups.
double gaussian_mi(const MatrixXd& covariance, std::span<const Index> group_a,
                   std::span<const Index> group_b);

struct ConservativenessEntry {
  std::size_t atom = 0;
  double redundancy_rate = 0.0;  // I^∩(α)
  double min_group_rate = 0.0;   // min_j time-domain MIR of group j
  bool singleton = false;
  bool holds = true;
};

struct ConservativenessReport {
  std::vector<ConservativenessEntry> entries;
  int violations = 0;
  /// Largest relative gap between I^∩ and the oracle on singleton atoms.
  double max_singleton_gap = 0.0;
  bool ok() const noexcept { return violations == 0; }
};

/// Checks I^∩(α) ≤ min_j I_{X_{α_j};Y} + tolerance against the block-Toeplitz
/// oracle. Singleton atoms must also match it within singleton_rel_tol.
ConservativenessReport conservativeness_check(const PirdResult& result,
                                              const VarModel& model,
                                              int max_lag = 200,
                                              double tolerance = 1e-6,
                                              double singleton_rel_tol = 0.01);

}  // namespace pird
