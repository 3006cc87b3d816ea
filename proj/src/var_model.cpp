#include "pird/var_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pird/errors.hpp"

namespace pird {

namespace {

std::string channel_name(const TimeSeriesSet& series, Index c) {
  if (static_cast<std::size_t>(c) < series.labels.size() &&
      !series.labels[c].empty()) {
    return series.labels[c];
  }
  return "channel " + std::to_string(c + 1);
}

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace

VarModel::VarModel(std::vector<MatrixXd> coeffs, MatrixXd innovation_cov)
    : coeffs_(std::move(coeffs)), innovation_cov_(std::move(innovation_cov)) {
  const Index m = innovation_cov_.rows();
  if (m == 0 || innovation_cov_.cols() != m) {
    throw SizeError("innovation covariance must be a non-empty square matrix");
  }
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k].rows() != m || coeffs_[k].cols() != m) {
      throw SizeError("coefficient matrix at lag " + std::to_string(k + 1) +
                      " is not " + std::to_string(m) + "x" + std::to_string(m));
    }
  }
  if (!innovation_cov_.allFinite() ||
      std::any_of(coeffs_.begin(), coeffs_.end(),
                  [](const MatrixXd& a) { return !a.allFinite(); })) {
    throw DataError("VAR parameters contain non-finite values");
  }
  if ((innovation_cov_ - innovation_cov_.transpose()).cwiseAbs().maxCoeff() >
      1e-12) {
    throw DataError("innovation covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(innovation_cov_,
                                              Eigen::EigenvaluesOnly);
  const double top = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -1e-10 * top) {
    throw DataError("innovation covariance is not positive semi-definite");
  }
}

MatrixXd VarModel::companion() const {
  const Index m = dim();
  const Index p = order();
  MatrixXd f = MatrixXd::Zero(m * p, m * p);
  for (Index k = 0; k < p; ++k) f.block(0, k * m, m, m) = coeffs_[k];
  if (p > 1) f.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  return f;
}

double companion_spectral_radius(const VarModel& model) {
  if (model.order() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> eig(model.companion(), false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

void require_stable(const VarModel& model) {
  const double rho = companion_spectral_radius(model);
  if (!(rho < 1.0)) {
    throw StabilityError("VAR model is not stable: companion spectral radius " +
                         std::to_string(rho) + " >= 1");
  }
}

TimeSeriesSet simulate(const VarModel& model, Index n_samples, Index burn_in,
                       std::uint64_t seed) {
  if (n_samples <= 0) throw SizeError("n_samples must be positive");
  if (burn_in < 0) throw SizeError("burn_in must be non-negative");
  require_stable(model);

  const Index m = model.dim();
  const int p = model.order();
  Eigen::LLT<MatrixXd> llt(model.innovation_cov());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("innovation covariance is not positive definite");
  }
  const MatrixXd chol = llt.matrixL();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  TimeSeriesSet out;
  out.samples.resize(n_samples, m);
  for (Index c = 0; c < m; ++c) out.labels.push_back("s" + std::to_string(c + 1));

  // history[k] holds S(t−1−k)
  std::vector<VectorXd> history(std::max(p, 1), VectorXd::Zero(m));
  VectorXd z(m);
  VectorXd x(m);
  for (Index t = 0; t < burn_in + n_samples; ++t) {
    for (Index c = 0; c < m; ++c) z(c) = normal(rng);
    x.noalias() = chol * z;
    for (int k = 0; k < p; ++k) x.noalias() += model.coeff(k + 1) * history[k];
    if (p > 0) {
      std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
      history[0] = x;
    }
    if (t >= burn_in) out.samples.row(t - burn_in) = x.transpose();
  }
  return out;
}

VarModel estimate(const TimeSeriesSet& series, int order) {
  return estimate(series, order, order);
}

VarModel estimate(const TimeSeriesSet& series, int order, Index first_target) {
  if (order < 0) throw SizeError("VAR order must be non-negative");
  if (first_target < order) {
    throw SizeError("first fitted sample must not precede the model order");
  }
  const Index n = series.n_samples();
  const Index m = series.n_channels();
  if (m == 0) throw DataError("time series has no channels");
  const Index n_eff = n - first_target;
  const Index n_regressors = m * order;
  if (n_eff <= n_regressors + m) {
    throw EstimationError("too few samples (" + std::to_string(n) +
                          ") to fit a VAR(" + std::to_string(order) + ") on " +
                          std::to_string(m) + " channels");
  }
  if (!series.samples.allFinite()) {
    throw DataError("time series contains non-finite values");
  }

  const MatrixXd centered =
      series.samples.rowwise() - series.samples.colwise().mean();

  std::vector<std::string> constant;
  for (Index c = 0; c < m; ++c) {
    const double scale = series.samples.col(c).cwiseAbs().maxCoeff();
    const double var = centered.col(c).squaredNorm() / static_cast<double>(n);
    if (var <= 1e-24 * std::max(scale * scale, 1e-300)) {
      constant.push_back(channel_name(series, c));
    }
  }
  if (!constant.empty()) {
    std::string names;
    for (const auto& s : constant) names += (names.empty() ? "" : ", ") + s;
    throw EstimationError("rank-deficient regressors: constant channel(s) " +
                          names);
  }

  if (order == 0) {
    return VarModel::white_noise(sample_covariance(centered.bottomRows(n_eff)));
  }

  MatrixXd regressors(n_eff, n_regressors);
  for (Index i = 0; i < n_eff; ++i) {
    const Index t = first_target + i;
    for (int k = 1; k <= order; ++k) {
      regressors.block(i, (k - 1) * m, 1, m) = centered.row(t - k);
    }
  }
  const MatrixXd targets = centered.bottomRows(n_eff);

  Eigen::ColPivHouseholderQR<MatrixXd> qr(regressors);
  qr.setThreshold(1e-10);
  if (qr.rank() < n_regressors) {
    std::vector<std::string> offending;
    for (Index j = qr.rank(); j < n_regressors; ++j) {
      const Index col = qr.colsPermutation().indices()(j);
      const std::string name = channel_name(series, col % m);
      if (std::find(offending.begin(), offending.end(), name) ==
          offending.end()) {
        offending.push_back(name);
      }
    }
    std::string names;
    for (const auto& s : offending) names += (names.empty() ? "" : ", ") + s;
    throw EstimationError("rank-deficient regressors involving " + names);
  }

  const MatrixXd beta = qr.solve(targets);
  const MatrixXd residuals = targets - regressors * beta;
  MatrixXd sigma = residuals.transpose() * residuals / static_cast<double>(n_eff);
  sigma = 0.5 * (sigma + sigma.transpose()).eval();

  std::vector<MatrixXd> coeffs;
  coeffs.reserve(order);
  for (int k = 1; k <= order; ++k) {
    coeffs.push_back(beta.block((k - 1) * m, 0, m, m).transpose());
  }
  return VarModel(std::move(coeffs), std::move(sigma));
}

OrderSelection select_order_detailed(const TimeSeriesSet& series,
                                     int max_order) {
  if (max_order < 1) throw RangeError("max_order must be at least 1");
  OrderSelection out;
  const Index m = series.n_channels();
  out.effective_samples = series.n_samples() - max_order;
  const double n_eff = static_cast<double>(out.effective_samples);
  double best = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= max_order; ++p) {
    const VarModel fit = estimate(series, p, max_order);
    const Eigen::LDLT<MatrixXd> ldlt(fit.innovation_cov());
    const double log_det = ldlt.vectorD().array().log().sum();
    const double aic =
        log_det + 2.0 * p * static_cast<double>(m * m) / n_eff;
    out.aic.push_back(aic);
    if (aic < best) {
      best = aic;
      out.order = p;
    }
  }
  if (out.order == 0) {
    throw EstimationError("AIC undefined for every candidate order");
  }
  return out;
}

int select_order(const TimeSeriesSet& series, int max_order) {
  return select_order_detailed(series, max_order).order;
}

MatrixXd sample_covariance(const MatrixXd& samples) {
  const Index n = samples.rows();
  const Index m = samples.cols();
  if (n == 0) throw DataError("cannot take the covariance of an empty series");
  std::vector<double> terms(n);
  VectorXd mean(m);
  for (Index c = 0; c < m; ++c) {
    for (Index t = 0; t < n; ++t) terms[t] = samples(t, c);
    mean(c) = sorted_sum(terms) / static_cast<double>(n);
  }
  MatrixXd cov(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      for (Index t = 0; t < n; ++t) {
        terms[t] = (samples(t, i) - mean(i)) * (samples(t, j) - mean(j));
      }
      cov(i, j) = cov(j, i) = sorted_sum(terms) / static_cast<double>(n);
    }
  }
  return cov;
}

MatrixXd solve_discrete_lyapunov(const MatrixXd& a, const MatrixXd& q) {
  if (a.rows() != a.cols() || q.rows() != a.rows() || q.cols() != a.cols()) {
    throw SizeError("Lyapunov equation needs square A and Q of equal size");
  }
  // X = Σ_k A^k Q (Aᵀ)^k; each step doubles the number of summed terms.
  MatrixXd x = q;
  MatrixXd power = a;
  for (int iter = 0; iter < 64; ++iter) {
    x += power * x * power.transpose();
    power = (power * power).eval();
    if (power.cwiseAbs().maxCoeff() < 1e-18) return 0.5 * (x + x.transpose());
    if (!power.allFinite()) break;
  }
  throw StabilityError("discrete Lyapunov iteration did not converge");
}

std::vector<MatrixXd> autocovariances(const VarModel& model, int max_lag) {
  if (max_lag < 0) throw SizeError("max_lag must be non-negative");
  const Index m = model.dim();
  const int p = model.order();
  std::vector<MatrixXd> r(max_lag + 1, MatrixXd::Zero(m, m));
  if (p == 0) {
    r[0] = model.innovation_cov();
    return r;
  }
  require_stable(model);
  MatrixXd q = MatrixXd::Zero(m * p, m * p);
  q.topLeftCorner(m, m) = model.innovation_cov();
  const MatrixXd gamma = solve_discrete_lyapunov(model.companion(), q);
  for (int k = 0; k <= max_lag && k < p; ++k) r[k] = gamma.block(0, k * m, m, m);
  for (int k = p; k <= max_lag; ++k) {
    for (int l = 1; l <= p; ++l) r[k] += model.coeff(l) * r[k - l];
  }
  return r;
}

MatrixXd process_covariance(const VarModel& model) {
  return autocovariances(model, 0).front();
}

}  // namespace pird
