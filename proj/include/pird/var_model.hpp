#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace pird {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// n time points × M channels, with channel labels. `phases` optionally
/// carries a calendar phase per row (e.g. month 0..11) read from a date
/// column; empty when unknown.
struct TimeSeriesSet {
  MatrixXd samples;
  std::vector<std::string> labels;
  std::vector<int> phases;

  Index n_samples() const noexcept { return samples.rows(); }
  Index n_channels() const noexcept { return samples.cols(); }
};

/// Order-p vector autoregression
///   S(t) = Σ_{k=1..p} A_k S(t−k) + E(t),  E(t) ~ N(0, Σ).
class VarModel {
 public:
  /// Checks that every A_k is M×M, Σ is M×M, symmetric to 1e-12 and
  /// positive semi-definite.
  VarModel(std::vector<MatrixXd> coeffs, MatrixXd innovation_cov);

  static VarModel white_noise(MatrixXd innovation_cov) {
    return VarModel({}, std::move(innovation_cov));
  }

  Index dim() const noexcept { return innovation_cov_.rows(); }
  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  const std::vector<MatrixXd>& coeffs() const noexcept { return coeffs_; }
  /// A_lag for lag in 1..order.
  const MatrixXd& coeff(int lag) const { return coeffs_.at(lag - 1); }
  const MatrixXd& innovation_cov() const noexcept { return innovation_cov_; }

  /// (Mp × Mp) companion matrix; empty when p = 0.
  MatrixXd companion() const;

 private:
  std::vector<MatrixXd> coeffs_;
  MatrixXd innovation_cov_;
};

double companion_spectral_radius(const VarModel& model);

/// Throws StabilityError unless the companion spectral radius is < 1.
void require_stable(const VarModel& model);

constexpr Index kDefaultBurnIn = 1000;

/// Gaussian realization of the model. Innovations are L z with L the
/// lower Cholesky factor of Σ and z i.i.d. standard normal draws from a
/// mt19937_64 stream seeded with `seed`.
TimeSeriesSet simulate(const VarModel& model, Index n_samples,
                       Index burn_in = kDefaultBurnIn, std::uint64_t seed = 0);

/// Least-squares VAR(order) fit of the channel-demeaned series. Residual
/// covariance uses divisor n − p (number of fitted time points).
VarModel estimate(const TimeSeriesSet& series, int order);

/// Same, fitting only targets t ≥ first_target (first_target ≥ order), so
/// several orders can share one sample range.
VarModel estimate(const TimeSeriesSet& series, int order, Index first_target);

struct OrderSelection {
  int order = 0;
  /// aic[p-1] = ln det Σ̂(p) + 2 p M² / n_eff, p = 1..max_order.
  std::vector<double> aic;
  Index effective_samples = 0;
};

OrderSelection select_order_detailed(const TimeSeriesSet& series,
                                     int max_order);

int select_order(const TimeSeriesSet& series, int max_order);

/// Sample covariance (divisor n, channel means removed). Summation order is
/// canonicalized, so any row permutation of `samples` gives a bitwise
/// identical result.
MatrixXd sample_covariance(const MatrixXd& samples);

/// Solves X = A X Aᵀ + Q for stable A by the doubling iteration.
MatrixXd solve_discrete_lyapunov(const MatrixXd& a, const MatrixXd& q);

/// R(k) = E[S(t) S(t−k)ᵀ] for k = 0..max_lag, from the companion-form
/// Lyapunov solution and the Yule–Walker recursion.
std::vector<MatrixXd> autocovariances(const VarModel& model, int max_lag);

/// R(0), the zero-lag process covariance.
MatrixXd process_covariance(const VarModel& model);

}  // namespace pird
