#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "pird/errors.hpp"
#include "pird/sweep.hpp"

using namespace pird;

TEST_CASE("model parameters") {
  SUBCASE("setting 1, d = 0") {
    const auto m = build_model(SweepSetting::no_instantaneous, 0.0);
    MatrixXd a(3, 3);
    a << 0.8, 0.1, 0.0,
         0.1, 0.8, 0.0,
         0.0, 0.0, 0.0;
    CHECK(m.order() == 1);
    CHECK(m.coeff(1) == a);
    CHECK(m.innovation_cov() == MatrixXd::Identity(3, 3));
  }
  SUBCASE("setting 1, d = 0.5") {
    const auto m = build_model(SweepSetting::no_instantaneous, 0.5);
    CHECK(m.coeff(1)(kSweepX1, kSweepX1) == 0.4);
    CHECK(m.coeff(1)(kSweepY, kSweepX1) == 0.5);
    CHECK(m.coeff(1)(kSweepY, kSweepX2) == 0.5);
    CHECK(m.coeff(1)(kSweepY, kSweepY) == 0.0);
  }
  SUBCASE("setting 2, d = 0") {
    const auto m = build_model(SweepSetting::transition, 0.0);
    CHECK(m.coeff(1).isZero());
    MatrixXd s(3, 3);
    s << 1.0, 0.25, 0.5,
         0.25, 1.0, 0.25,
         0.5, 0.25, 1.0;
    CHECK(m.innovation_cov() == s);
  }
  SUBCASE("setting 2, d = 1") {
    const auto m = build_model(SweepSetting::transition, 1.0);
    MatrixXd a(3, 3);
    a << 0.2, 0.1, 0.0,
         0.1, 0.2, 0.0,
         0.6, 0.6, 0.0;
    CHECK(m.coeff(1) == a);
    CHECK(m.innovation_cov() == MatrixXd::Identity(3, 3));
  }
  CHECK_THROWS_AS(build_model(SweepSetting::transition, 1.5), RangeError);
  CHECK_THROWS_AS(build_model(SweepSetting::transition, -0.01), RangeError);
  CHECK_THROWS_AS(build_model(SweepSetting::transition, std::nan("")), RangeError);
}

TEST_CASE("both settings are stable over the whole d range") {
  for (auto setting : {SweepSetting::no_instantaneous, SweepSetting::transition}) {
    for (int i = 0; i <= 100; ++i) {
      const auto m = build_model(setting, i / 100.0);
      CHECK(companion_spectral_radius(m) < 1.0);
    }
  }
}

TEST_CASE("zero-lag covariance") {
  SUBCASE("white noise") {
    const auto m = build_model(SweepSetting::transition, 0.0);
    CHECK((zero_lag_covariance(m) - m.innovation_cov()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("scalar AR(1)") {
    const VarModel m({MatrixXd::Constant(1, 1, 0.7)}, MatrixXd::Constant(1, 1, 1.5));
    CHECK(zero_lag_covariance(m)(0, 0) == doctest::Approx(1.5 / (1.0 - 0.49)).epsilon(1e-13));
  }
  SUBCASE("agrees with the Kronecker solve") {
    for (double d : {0.1, 0.5, 0.9}) {
      const auto m = build_model(SweepSetting::no_instantaneous, d);
      CHECK((zero_lag_covariance(m) - oracle::process_covariance(m)).cwiseAbs().maxCoeff() <
            1e-12);
    }
  }
  SUBCASE("lagged effects alone create zero-lag dependence") {
    const std::vector<Index> x{kSweepX1, kSweepX2}, y{kSweepY};
    for (double d : {0.05, 0.5, 1.0}) {
      const auto m = build_model(SweepSetting::no_instantaneous, d);
      CHECK(m.innovation_cov().isDiagonal());
      CHECK(gaussian_mi(zero_lag_covariance(m), x, y) > 0.0);
    }
  }
}

TEST_CASE("default d grid") {
  const auto g = default_d_grid();
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[7] == doctest::Approx(0.35));
}

TEST_CASE("sweep from true parameters") {
  SweepConfig cfg;
  cfg.grid_points = 513;
  SUBCASE("setting 1") {
    const auto r = run_sweep(cfg);
    REQUIRE(r.rows.size() == 21);
    CHECK(std::abs(r.rows[0].joint_mir) < 1e-10);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      CHECK(row.d == cfg.d_grid[i]);
      CHECK(std::abs(row.pird.unique[0]) <= 1e-9);
      CHECK(std::abs(row.pird.unique[1]) <= 1e-9);
      CHECK(row.pird.redundancy + row.pird.synergy ==
            doctest::Approx(row.joint_mir).epsilon(1e-10));
      if (i > 0) {
        CHECK(row.joint_mir > r.rows[i - 1].joint_mir);
        CHECK(row.zero_lag_mi > 0.0);
      }
    }
    // Net synergy grows with the common-target coupling and ends positive.
    for (std::size_t i = 2; i < r.rows.size(); ++i) {
      const double prev = r.rows[i - 1].pird.synergy - r.rows[i - 1].pird.redundancy;
      const double cur = r.rows[i].pird.synergy - r.rows[i].pird.redundancy;
      if (r.rows[i].d >= 0.25) CHECK(cur > prev);
    }
    CHECK(r.rows.back().pird.synergy > r.rows.back().pird.redundancy);
  }
  SUBCASE("setting 2") {
    cfg.setting = SweepSetting::transition;
    const auto r = run_sweep(cfg);
    const auto& first = r.rows.front();
    CHECK(first.pird.redundancy == doctest::Approx(first.pid.redundancy).epsilon(1e-10));
    CHECK(std::abs(first.pird.unique[0] - first.pid.unique[0]) < 1e-8);
    CHECK(std::abs(first.pird.unique[1] - first.pid.unique[1]) < 1e-8);
    CHECK(std::abs(first.pird.synergy - first.pid.synergy) < 1e-8);
    CHECK(std::abs(first.joint_mir - first.zero_lag_mi) < 1e-8);
    for (const auto& row : r.rows) {
      if (row.d > 0.7) CHECK(row.pird.synergy > row.pird.redundancy);
    }
    // Zero-lag information decays monotonically as instantaneous effects vanish.
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      CHECK(r.rows[i].zero_lag_mi < r.rows[i - 1].zero_lag_mi);
    }
  }
  SUBCASE("invalid grid") {
    cfg.d_grid = {0.0, 1.2};
    CHECK_THROWS_AS(run_sweep(cfg), RangeError);
  }
}

TEST_CASE("sweep in estimation mode") {
  SweepConfig cfg;
  cfg.d_grid = {0.0, 0.8};
  cfg.grid_points = 257;
  cfg.estimate = true;
  cfg.n_samples = 4000;
  cfg.seed = 5;
  cfg.max_order = 4;
  const auto r = run_sweep(cfg);
  const auto exact = [] {
    SweepConfig c;
    c.d_grid = {0.0, 0.8};
    c.grid_points = 257;
    return run_sweep(c);
  }();
  REQUIRE(r.rows.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.rows[i].order >= 1);
    CHECK(std::abs(r.rows[i].joint_mir - exact.rows[i].joint_mir) < 0.02);
  }
  const auto again = run_sweep(cfg);
  CHECK(again.rows[1].joint_mir == r.rows[1].joint_mir);
}

TEST_CASE("sweep CSV") {
  SweepConfig cfg;
  cfg.d_grid = {0.0, 0.5};
  cfg.grid_points = 65;
  const auto r = run_sweep(cfg);
  std::ostringstream out;
  write_sweep_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "d,joint_mir,pird_R,pird_U1,pird_U2,pird_S,zero_lag_mi,pid_R,pid_U1,pid_U2,pid_S");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 10);
  }
  CHECK(rows == 2);

  std::ostringstream bits;
  write_sweep_csv(bits, r, 2.0);
  std::istringstream b(bits.str());
  std::getline(b, line);
  std::getline(b, line);
  std::getline(b, line);
  const double joint_scaled = std::stod(line.substr(line.find(',') + 1));
  CHECK(joint_scaled == doctest::Approx(2.0 * r.rows[1].joint_mir).epsilon(1e-15));
}
