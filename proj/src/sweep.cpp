#include "pird/sweep.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "pird/errors.hpp"

namespace pird {

VarModel build_model(SweepSetting setting, double d) {
  if (!(d >= 0.0 && d <= 1.0)) {
    throw RangeError("modulation parameter d must lie in [0, 1], got " +
                     std::to_string(d));
  }
  double a = 0.0, b = 0.0, c = 0.0;
  double r_u1u2 = 0.0, r_wu1 = 0.0, r_wu2 = 0.0;
  switch (setting) {
    case SweepSetting::no_instantaneous:
      a = 0.8 * (1.0 - d);
      b = 0.1;
      c = d;
      break;
    case SweepSetting::transition:
      a = 0.2 * d;
      b = 0.1 * d;
      c = 0.6 * d;
      r_u1u2 = r_wu2 = 0.25 * (1.0 - d);
      r_wu1 = 0.5 * (1.0 - d);
      break;
    default:
      throw RangeError("unknown sweep setting");
  }

  MatrixXd lag1 = MatrixXd::Zero(3, 3);
  lag1(kSweepX1, kSweepX1) = a;
  lag1(kSweepX1, kSweepX2) = b;
  lag1(kSweepX2, kSweepX2) = a;
  lag1(kSweepX2, kSweepX1) = b;
  lag1(kSweepY, kSweepX1) = c;
  lag1(kSweepY, kSweepX2) = c;

  MatrixXd sigma = MatrixXd::Identity(3, 3);
  sigma(kSweepX1, kSweepX2) = sigma(kSweepX2, kSweepX1) = r_u1u2;
  sigma(kSweepY, kSweepX1) = sigma(kSweepX1, kSweepY) = r_wu1;
  sigma(kSweepY, kSweepX2) = sigma(kSweepX2, kSweepY) = r_wu2;
  return VarModel({lag1}, sigma);
}

MatrixXd zero_lag_covariance(const VarModel& model) {
  return process_covariance(model);
}

std::vector<double> default_d_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  return grid;
}

SweepResult run_sweep(const SweepConfig& config) {
  for (double d : config.d_grid) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw RangeError("sweep d values must lie in [0, 1], got " + std::to_string(d));
    }
  }
  const FrequencyGrid grid(config.grid_points);
  const std::vector<Index> sources{kSweepX1, kSweepX2};

  SweepResult result;
  result.config = config;
  for (std::size_t i = 0; i < config.d_grid.size(); ++i) {
    const double d = config.d_grid[i];
    const VarModel truth = build_model(config.setting, d);

    SweepRow row;
    row.d = d;
    VarModel analyzed = truth;
    MatrixXd cov0;
    if (config.estimate) {
      auto series = simulate(truth, config.n_samples, kDefaultBurnIn,
                             config.seed + static_cast<std::uint64_t>(i));
      row.order = select_order(series, config.max_order);
      analyzed = estimate(series, row.order);
      cov0 = sample_covariance(series.samples);
    } else {
      cov0 = zero_lag_covariance(truth);
    }
    const auto pird = decompose(analyzed, kSweepY, sources, grid);
    row.pird = summarize(pird);
    row.joint_mir = pird.joint_mir;
    const auto pid = static_decomposition(cov0, kSweepY, sources);
    row.pid = summarize(pid);
    row.zero_lag_mi = pid.joint_mir;
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result, double scale) {
  out << "d,joint_mir,pird_R,pird_U1,pird_U2,pird_S,"
         "zero_lag_mi,pid_R,pid_U1,pid_U2,pid_S\n";
  out << std::setprecision(17);
  for (const auto& r : result.rows) {
    out << r.d << ',' << r.joint_mir * scale << ',' << r.pird.redundancy * scale
        << ',' << r.pird.unique[0] * scale << ',' << r.pird.unique[1] * scale
        << ',' << r.pird.synergy * scale << ',' << r.zero_lag_mi * scale << ','
        << r.pid.redundancy * scale << ',' << r.pid.unique[0] * scale << ','
        << r.pid.unique[1] * scale << ',' << r.pid.synergy * scale << '\n';
  }
}

}  // namespace pird
