#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "pird/pird.hpp"

namespace pird {

/// The two modulation families of the three-node system
///   X1(t) = a1 X1(t−1) + b1 X2(t−1) + U1(t)
///   X2(t) = a2 X2(t−1) + b2 X1(t−1) + U2(t)
///   Y(t)  = c1 X1(t−1) + c2 X2(t−1) + W(t)
/// with channels ordered (X1, X2, Y).
enum class SweepSetting {
  /// a = 0.8(1−d), b = 0.1, c = d, uncorrelated innovations.
  no_instantaneous = 1,
  /// a = 0.2d, b = 0.1d, c = 0.6d; R_U1U2 = R_WU2 = 0.25(1−d), R_WU1 = 0.5(1−d).
  transition = 2,
};

inline constexpr Index kSweepX1 = 0;
inline constexpr Index kSweepX2 = 1;
inline constexpr Index kSweepY = 2;

VarModel build_model(SweepSetting setting, double d);

/// R(0) of the process, from the discrete Lyapunov equation.
MatrixXd zero_lag_covariance(const VarModel& model);

/// 0, 0.05, ..., 1.
std::vector<double> default_d_grid();

struct SweepConfig {
  SweepSetting setting = SweepSetting::no_instantaneous;
  std::vector<double> d_grid = default_d_grid();
  int grid_points = kDefaultGridPoints;
  /// Simulate each system and analyze estimated parameters instead of the
  /// true ones.
  bool estimate = false;
  Index n_samples = 4096;
  std::uint64_t seed = 0;
  int max_order = 10;
};

struct SweepRow {
  double d = 0.0;
  PirdSummary pird;
  PirdSummary pid;
  double joint_mir = 0.0;
  double zero_lag_mi = 0.0;
  int order = 1;  // VAR order analyzed (selected by AIC in estimate mode)
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepConfig& config);

/// d, joint_mir, pird_R, pird_U1, pird_U2, pird_S, zero_lag_mi, pid_R,
/// pid_U1, pid_U2, pid_S. Rates are multiplied by `scale` (1 for nats).
void write_sweep_csv(std::ostream& out, const SweepResult& result,
                     double scale = 1.0);

}  // namespace pird
