#include "pird/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "pird/errors.hpp"

namespace pird {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPivotThreshold = 1e-12;

void check_channels(std::span<const Index> group, Index dim, const char* what) {
  if (group.empty()) throw SizeError(std::string(what) + " group is empty");
  for (Index c : group) {
    if (c < 0 || c >= dim) {
      throw SizeError(std::string(what) + " channel " + std::to_string(c) +
                      " outside 0.." + std::to_string(dim - 1));
    }
  }
}

MatrixXcd submatrix(const MatrixXcd& p, std::span<const Index> idx) {
  const Index n = static_cast<Index>(idx.size());
  MatrixXcd out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) out(i, j) = p(idx[i], idx[j]);
  }
  return out;
}

/// Time-major covariance of n consecutive samples of the given channels:
/// entry ((i,a),(j,b)) = Cov(S_a(t−i), S_b(t−j)).
MatrixXd block_toeplitz(const std::vector<MatrixXd>& r,
                        std::span<const Index> channels, int n) {
  const Index c = static_cast<Index>(channels.size());
  MatrixXd out(n * c, n * c);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool forward = j >= i;
      const MatrixXd& lag = r[forward ? j - i : i - j];
      for (Index a = 0; a < c; ++a) {
        for (Index b = 0; b < c; ++b) {
          out(i * c + a, j * c + b) = forward ? lag(channels[a], channels[b])
                                              : lag(channels[b], channels[a]);
        }
      }
    }
  }
  return out;
}

/// log det of the leading (k·c)×(k·c) blocks for k = n, n−1, n−2.
std::array<double, 3> leading_log_dets(const MatrixXd& cov, Index c, int n) {
  Eigen::LLT<MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DegenerateSpectrumError(
        "block-Toeplitz covariance is not positive definite");
  }
  const auto diag = llt.matrixLLT().diagonal();
  std::array<double, 3> out{};
  for (int d = 0; d < 3; ++d) {
    const Index rows = (n - d) * c;
    out[d] = 2.0 * diag.head(rows).array().log().sum();
  }
  return out;
}

}  // namespace

FrequencyGrid::FrequencyGrid(int n_points) {
  if (n_points < 2) throw SizeError("frequency grid needs at least 2 points");
  const double step = 1.0 / static_cast<double>(n_points - 1);
  points_.resize(n_points);
  weights_.assign(n_points, step);
  for (int k = 0; k < n_points; ++k) points_[k] = kPi * k * step;
  points_.back() = kPi;
  weights_.front() *= 0.5;
  weights_.back() *= 0.5;
}

double integrate(std::span<const double> profile, const FrequencyGrid& grid,
                 std::optional<Band> band) {
  if (profile.size() != grid.size()) {
    throw SizeError("profile length " + std::to_string(profile.size()) +
                    " does not match grid size " + std::to_string(grid.size()));
  }
  const auto w = grid.weights();
  if (!band || (band->lo <= 0.0 && band->hi >= kPi)) {
    if (band && (band->lo < 0.0 || band->hi > kPi)) {
      throw RangeError("band must lie within [0, pi]");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < profile.size(); ++k) s += w[k] * profile[k];
    return s;
  }
  const double lo = band->lo;
  const double hi = band->hi;
  if (!(lo >= 0.0) || !(hi <= kPi) || !(lo <= hi)) {
    throw RangeError("band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] must satisfy 0 <= lo <= hi <= pi");
  }
  const auto x = grid.points();
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double a = std::max(lo, x[k]);
    const double b = std::min(hi, x[k + 1]);
    if (b <= a) continue;
    const double h = x[k + 1] - x[k];
    auto f = [&](double t) {
      const double u = (t - x[k]) / h;
      return (1.0 - u) * profile[k] + u * profile[k + 1];
    };
    s += 0.5 * (b - a) * (f(a) + f(b));
  }
  return s / kPi;
}

SpectralDensity::SpectralDensity(FrequencyGrid grid,
                                 std::vector<MatrixXcd> matrices)
    : grid_(std::move(grid)), matrices_(std::move(matrices)) {
  if (matrices_.size() != grid_.size()) {
    throw SizeError("one spectral matrix per grid point is required");
  }
}

SpectralDensity var_to_spectrum(const VarModel& model,
                                const FrequencyGrid& grid) {
  require_stable(model);
  const Index m = model.dim();
  const MatrixXcd sigma = model.innovation_cov().cast<std::complex<double>>();
  std::vector<MatrixXcd> out;
  out.reserve(grid.size());
  for (double w : grid.points()) {
    MatrixXcd g = MatrixXcd::Identity(m, m);
    for (int k = 1; k <= model.order(); ++k) {
      g -= model.coeff(k).cast<std::complex<double>>() *
           std::polar(1.0, -w * static_cast<double>(k));
    }
    Eigen::FullPivLU<MatrixXcd> lu(g);
    lu.setThreshold(kPivotThreshold);
    if (!lu.isInvertible()) {
      throw StabilityError("transfer function is singular at omega = " +
                           std::to_string(w));
    }
    const MatrixXcd h = lu.inverse();
    MatrixXcd p = h * sigma * h.adjoint();
    out.push_back(0.5 * (p + p.adjoint()));
  }
  return SpectralDensity(grid, std::move(out));
}

double hermitian_log_det(const MatrixXcd& p) {
  const Index n = p.rows();
  if (n == 0) return 0.0;
  double scale = 0.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(p(i, i).real()));
  if (!(scale > 0.0)) {
    throw DegenerateSpectrumError("spectral matrix has a zero diagonal");
  }
  // Unpivoted LDLᴴ; the pivots d_k are the successive conditional variances.
  MatrixXcd l = MatrixXcd::Identity(n, n);
  std::vector<double> d(n);
  double log_det = 0.0;
  for (Index j = 0; j < n; ++j) {
    std::complex<double> v = p(j, j);
    for (Index k = 0; k < j; ++k) v -= l(j, k) * std::conj(l(j, k)) * d[k];
    d[j] = v.real();
    if (!(d[j] > kPivotThreshold * scale)) {
      throw DegenerateSpectrumError("spectral matrix is singular (pivot " +
                                    std::to_string(d[j]) + ")");
    }
    log_det += std::log(d[j]);
    for (Index i = j + 1; i < n; ++i) {
      std::complex<double> u = p(i, j);
      for (Index k = 0; k < j; ++k) u -= l(i, k) * std::conj(l(j, k)) * d[k];
      l(i, j) = u / d[j];
    }
  }
  return log_det;
}

double spectral_mir(const SpectralDensity& spec, std::span<const Index> group,
                    Index target, std::size_t omega_index) {
  const Index m = spec.dim();
  check_channels(group, m, "source");
  if (target < 0 || target >= m) throw SizeError("target channel out of range");
  if (std::find(group.begin(), group.end(), target) != group.end()) {
    throw SizeError("target channel must not belong to the source group");
  }
  std::vector<Index> joint(group.begin(), group.end());
  joint.push_back(target);

  const MatrixXcd& p = spec.at(omega_index);
  try {
    const double ld_group = hermitian_log_det(submatrix(p, group));
    const double ld_joint = hermitian_log_det(submatrix(p, joint));
    const double p_target = p(target, target).real();
    if (!(p_target > 0.0)) {
      throw DegenerateSpectrumError("target spectrum vanishes");
    }
    return 0.5 * (ld_group + std::log(p_target) - ld_joint);
  } catch (const DegenerateSpectrumError& e) {
    throw DegenerateSpectrumError(std::string(e.what()) + " at omega = " +
                                  std::to_string(spec.grid().point(omega_index)));
  }
}

std::vector<double> spectral_mir_profile(const SpectralDensity& spec,
                                         std::span<const Index> group,
                                         Index target) {
  std::vector<double> out(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    out[k] = spectral_mir(spec, group, target, k);
  }
  return out;
}

OracleResult time_domain_mir_oracle(const VarModel& model,
                                    std::span<const Index> group_a,
                                    std::span<const Index> group_b,
                                    int max_lag) {
  const Index m = model.dim();
  check_channels(group_a, m, "first");
  check_channels(group_b, m, "second");
  for (Index a : group_a) {
    if (std::find(group_b.begin(), group_b.end(), a) != group_b.end()) {
      throw SizeError("channel groups must be disjoint");
    }
  }
  if (max_lag < 3) throw SizeError("max_lag must be at least 3");

  const auto r = autocovariances(model, max_lag);
  std::vector<Index> joint(group_a.begin(), group_a.end());
  joint.insert(joint.end(), group_b.begin(), group_b.end());

  const auto ld_a = leading_log_dets(block_toeplitz(r, group_a, max_lag),
                                     static_cast<Index>(group_a.size()), max_lag);
  const auto ld_b = leading_log_dets(block_toeplitz(r, group_b, max_lag),
                                     static_cast<Index>(group_b.size()), max_lag);
  const auto ld_ab = leading_log_dets(block_toeplitz(r, joint, max_lag),
                                      static_cast<Index>(joint.size()), max_lag);
  std::array<double, 3> mi{};
  for (int d = 0; d < 3; ++d) mi[d] = 0.5 * (ld_a[d] + ld_b[d] - ld_ab[d]);

  OracleResult out;
  out.rate = mi[0] - mi[1];
  out.last_change = std::abs(out.rate - (mi[1] - mi[2]));
  const double r0 = r[0].cwiseAbs().maxCoeff();
  out.tail_ratio = r0 > 0.0 ? r[max_lag].cwiseAbs().maxCoeff() / r0 : 0.0;
  out.converged = out.last_change <= 1e-8 + 1e-5 * std::abs(out.rate);
  return out;
}

}  // namespace pird
