#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pird/var_model.hpp"

namespace pird {

using Eigen::MatrixXcd;

/// A frequency band [lo, hi] ⊆ [0, π] in normalized angular frequency.
struct Band {
  double lo = 0.0;
  double hi = 0.0;
};

constexpr int kDefaultGridPoints = 1025;

/// Uniform grid on [0, π] with trapezoidal weights normalized so that the
/// weighted sum computes (1/π)∫₀^π. For the even spectra of real processes
/// this equals (1/2π)∫_{−π}^{π}.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(int n_points = kDefaultGridPoints);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double point(std::size_t k) const { return points_.at(k); }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// (1/π)∫ over the band (default: all of [0, π]) of the piecewise-linear
/// interpolant of `profile`. Throws RangeError for bands outside [0, π].
double integrate(std::span<const double> profile, const FrequencyGrid& grid,
                 std::optional<Band> band = std::nullopt);

/// Hermitian cross-spectral matrices P(ω_k) on a grid.
class SpectralDensity {
 public:
  SpectralDensity(FrequencyGrid grid, std::vector<MatrixXcd> matrices);

  const FrequencyGrid& grid() const noexcept { return grid_; }
  Index dim() const noexcept { return matrices_.empty() ? 0 : matrices_[0].rows(); }
  std::size_t size() const noexcept { return matrices_.size(); }
  const MatrixXcd& at(std::size_t k) const { return matrices_.at(k); }

 private:
  FrequencyGrid grid_;
  std::vector<MatrixXcd> matrices_;
};

/// P(ω) = H(ω) Σ H(ω)ᴴ with H(ω) = (I − Σ_k A_k e^{−iωk})⁻¹.
SpectralDensity var_to_spectrum(const VarModel& model, const FrequencyGrid& grid);

/// log det of a Hermitian positive-definite matrix by an LDLᴴ factorization.
/// A pivot at or below 1e-12 × (largest diagonal entry) raises
/// DegenerateSpectrumError.
double hermitian_log_det(const MatrixXcd& p);

/// ½ log( det P_g(ω) · P_y(ω) / det P_[g,y](ω) ) in nats, where g is a
/// group of channel indices and y the target channel (0-based).
double spectral_mir(const SpectralDensity& spec, std::span<const Index> group,
                    Index target, std::size_t omega_index);

/// spectral_mir at every grid point.
std::vector<double> spectral_mir_profile(const SpectralDensity& spec,
                                         std::span<const Index> group,
                                         Index target);

struct OracleResult {
  double rate = 0.0;
  /// |increment(n) − increment(n−1)|; small once the block MI is linear in n.
  double last_change = 0.0;
  /// max|R(max_lag)| / max|R(0)|.
  double tail_ratio = 0.0;
  /// False when the autocovariance or the increments have not settled.
  bool converged = true;
};

/// Brute-force Gaussian mutual information rate between two channel groups:
/// I_n = MI of n consecutive samples of each group, computed from the
/// block-Toeplitz covariance, and rate = I_n − I_{n−1} at n = max_lag.
OracleResult time_domain_mir_oracle(const VarModel& model,
                                    std::span<const Index> group_a,
                                    std::span<const Index> group_b,
                                    int max_lag);

}  // namespace pird
