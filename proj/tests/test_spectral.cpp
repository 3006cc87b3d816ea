#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pird/errors.hpp"
#include "pird/spectral.hpp"
#include "pird/sweep.hpp"

using namespace pird;
using std::numbers::pi;

namespace {

double real_integral_of_entry(const SpectralDensity& s, Index i, Index j) {
  std::vector<double> profile(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) profile[k] = s.at(k)(i, j).real();
  return integrate(profile, s.grid());
}

const std::vector<Index> kX1{kSweepX1};
const std::vector<Index> kX2{kSweepX2};
const std::vector<Index> kX12{kSweepX1, kSweepX2};
const std::vector<Index> kY{kSweepY};

}  // namespace

TEST_CASE("frequency grid") {
  const FrequencyGrid g(5);
  REQUIRE(g.size() == 5);
  CHECK(g.point(0) == 0.0);
  CHECK(g.point(4) == pi);
  CHECK(g.point(2) == doctest::Approx(pi / 2));
  double total = 0.0;
  for (double w : g.weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.point(k) > g.point(k - 1));
  CHECK_THROWS_AS(FrequencyGrid(1), SizeError);
  CHECK(FrequencyGrid().size() == 1025);
}

TEST_CASE("band integration") {
  const FrequencyGrid g(1025);
  const std::vector<double> c(g.size(), 0.37);
  CHECK(integrate(c, g) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK(integrate(c, g, Band{0.0, pi / 2}) == doctest::Approx(0.185).epsilon(1e-14));
  CHECK(integrate(c, g, Band{0.3, 0.3001}) == doctest::Approx(0.37 * 1e-4 / pi).epsilon(1e-9));
  CHECK(integrate(c, g, Band{0.0, pi}) == doctest::Approx(0.37).epsilon(1e-14));
  CHECK_THROWS_AS(integrate(c, g, Band{-0.1, 1.0}), RangeError);
  CHECK_THROWS_AS(integrate(c, g, Band{0.0, 3.5}), RangeError);
  CHECK_THROWS_AS(integrate(c, g, Band{1.0, 0.5}), RangeError);
  const std::vector<double> wrong(3, 1.0);
  CHECK_THROWS_AS(integrate(wrong, g), SizeError);

  // A linear profile is integrated exactly on any band.
  std::vector<double> lin(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) lin[k] = g.point(k);
  const double lo = 0.4, hi = 2.2;
  CHECK(integrate(lin, g, Band{lo, hi}) ==
        doctest::Approx((hi * hi - lo * lo) / (2 * pi)).epsilon(1e-12));
}

TEST_CASE("spectra of simple models") {
  const FrequencyGrid g(9);
  SUBCASE("white noise is flat") {
    MatrixXd sigma(2, 2);
    sigma << 2.0, 0.5, 0.5, 1.0;
    const auto s = var_to_spectrum(VarModel::white_noise(sigma), g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK((s.at(k).real() - sigma).cwiseAbs().maxCoeff() < 1e-15);
      CHECK(s.at(k).imag().cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("scalar AR(1)") {
    const VarModel m({MatrixXd::Constant(1, 1, 0.5)}, MatrixXd::Identity(1, 1));
    const auto s = var_to_spectrum(m, g);
    CHECK(s.at(0)(0, 0).real() == doctest::Approx(4.0).epsilon(1e-14));
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double w = g.point(k);
      const double expected = 1.0 / std::norm(1.0 - 0.5 * std::polar(1.0, -w));
      CHECK(s.at(k)(0, 0).real() == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  SUBCASE("unstable model is rejected") {
    const VarModel m({MatrixXd::Constant(1, 1, 1.0)}, MatrixXd::Identity(1, 1));
    CHECK_THROWS_AS(var_to_spectrum(m, g), StabilityError);
  }
}

TEST_CASE("integrated spectrum equals the zero-lag covariance") {
  std::mt19937_64 rng(3);
  const FrequencyGrid g(4096);
  for (int rep = 0; rep < 10; ++rep) {
    const auto model = oracle::random_stable_var(rng, 3, 1 + rep % 3, 0.85);
    const MatrixXd r0 = oracle::process_covariance(model);
    const auto s = var_to_spectrum(model, g);
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        const double got = real_integral_of_entry(s, i, j);
        CHECK(std::abs(got - r0(i, j)) < 1e-3 * r0.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("spectral matrices are Hermitian and positive semi-definite") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> radius(0.1, 0.95);
  const FrequencyGrid g(65);
  for (int rep = 0; rep < 100; ++rep) {
    const auto model = oracle::random_stable_var(rng, 3, rep % 4, radius(rng));
    const auto s = var_to_spectrum(model, g);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const MatrixXcd& p = s.at(k);
      CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(p);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
      for (Index i = 0; i < 3; ++i) CHECK(p(i, i).real() >= 0.0);
    }
  }
}

TEST_CASE("spectral MIR identities") {
  SUBCASE("independent target") {
    MatrixXd sigma = MatrixXd::Identity(3, 3);
    sigma(0, 1) = sigma(1, 0) = 0.6;
    const auto s = var_to_spectrum(VarModel::white_noise(sigma), FrequencyGrid(3));
    const std::vector<Index> g{0, 1};
    CHECK(std::abs(spectral_mir(s, g, 2, 1)) < 1e-15);
  }
  SUBCASE("two channels: minus half log of one minus coherence") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
      MatrixXcd b(2, 2);
      for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 2; ++j) b(i, j) = {n(rng), n(rng)};
      }
      const MatrixXcd p = b * b.adjoint() + 0.01 * MatrixXcd::Identity(2, 2);
      const SpectralDensity s(FrequencyGrid(2), {p, p});
      const double coh = std::norm(p(0, 1)) / (p(0, 0).real() * p(1, 1).real());
      const std::vector<Index> g{0};
      CHECK(spectral_mir(s, g, 1, 0) == doctest::Approx(-0.5 * std::log(1.0 - coh)).epsilon(1e-10));
    }
  }
  SUBCASE("duplicated channel is degenerate") {
    MatrixXd sigma = MatrixXd::Ones(3, 3);
    sigma(2, 2) = 2.0;
    sigma(0, 2) = sigma(2, 0) = sigma(1, 2) = sigma(2, 1) = 0.5;
    const SpectralDensity s(FrequencyGrid(2), {sigma.cast<std::complex<double>>(),
                                               sigma.cast<std::complex<double>>()});
    const std::vector<Index> g{0, 1};
    CHECK_THROWS_AS(spectral_mir(s, g, 2, 0), DegenerateSpectrumError);
  }
  SUBCASE("argument checks") {
    const auto s = var_to_spectrum(VarModel::white_noise(MatrixXd::Identity(3, 3)), FrequencyGrid(3));
    const std::vector<Index> overlap{0, 2};
    const std::vector<Index> outside{5};
    CHECK_THROWS_AS(spectral_mir(s, overlap, 2, 0), SizeError);
    CHECK_THROWS_AS(spectral_mir(s, outside, 2, 0), SizeError);
    CHECK_THROWS_AS(spectral_mir(s, {}, 2, 0), SizeError);
  }
}

TEST_CASE("time-domain oracle limits") {
  SUBCASE("independent channels") {
    const auto model = build_model(SweepSetting::no_instantaneous, 0.0);
    CHECK(std::abs(time_domain_mir_oracle(model, kX12, kY, 50).rate) < 1e-12);
  }
  SUBCASE("white noise with correlation rho") {
    const double rho = 0.6;
    MatrixXd sigma(2, 2);
    sigma << 1.0, rho, rho, 1.0;
    const std::vector<Index> a{0}, b{1};
    const auto r = time_domain_mir_oracle(VarModel::white_noise(sigma), a, b, 20);
    CHECK(r.rate == doctest::Approx(-0.5 * std::log(1.0 - rho * rho)).epsilon(1e-12));
    CHECK(r.converged);
  }
  SUBCASE("argument checks") {
    const auto model = build_model(SweepSetting::no_instantaneous, 0.5);
    CHECK_THROWS_AS(time_domain_mir_oracle(model, kX12, kX1, 50), SizeError);
    CHECK_THROWS_AS(time_domain_mir_oracle(model, kX1, kY, 2), SizeError);
  }
  SUBCASE("short lag is reported as unconverged") {
    const auto model = build_model(SweepSetting::no_instantaneous, 0.1);
    const auto r = time_domain_mir_oracle(model, kX12, kY, 4);
    CHECK_FALSE(r.converged);
    CHECK(r.tail_ratio > 1e-3);
  }
}

TEST_CASE("spectral and time-domain MIR agree") {
  const FrequencyGrid g;
  SUBCASE("setting 1, d = 0.5") {
    const auto model = build_model(SweepSetting::no_instantaneous, 0.5);
    const auto s = var_to_spectrum(model, g);
    const double at_zero = spectral_mir(s, kX12, kSweepY, 0);
    CHECK(std::isfinite(at_zero));
    CHECK(at_zero > 0.0);
    for (const auto* grp : {&kX1, &kX2, &kX12}) {
      const double spectral = integrate(spectral_mir_profile(s, *grp, kSweepY), g);
      const auto oracle = time_domain_mir_oracle(model, *grp, kY, 150);
      CHECK(oracle.converged);
      CHECK(spectral == doctest::Approx(oracle.rate).epsilon(0.01));
    }
  }
  SUBCASE("random VAR(2) models of dimension 3") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> radius(0.3, 0.9);
    for (int rep = 0; rep < 5; ++rep) {
      const auto model = oracle::random_stable_var(rng, 3, 2, radius(rng));
      const auto s = var_to_spectrum(model, g);
      const std::vector<Index> src{0, 1}, tgt{2};
      const double spectral = integrate(spectral_mir_profile(s, src, 2), g);
      const auto oracle = time_domain_mir_oracle(model, src, tgt, 120);
      CHECK(spectral == doctest::Approx(oracle.rate).epsilon(0.01));
    }
  }
}

TEST_CASE("grid refinement converges") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const auto model = oracle::random_stable_var(rng, 3, 1 + rep % 2, 0.9);
    const std::vector<Index> src{0, 1};
    const double coarse = integrate(
        spectral_mir_profile(var_to_spectrum(model, FrequencyGrid(1025)), src, 2), FrequencyGrid(1025));
    const double fine = integrate(
        spectral_mir_profile(var_to_spectrum(model, FrequencyGrid(2049)), src, 2), FrequencyGrid(2049));
    CHECK(std::abs(fine - coarse) <= 1e-4 * std::abs(fine));
  }
}

TEST_CASE("adding channels never lowers the spectral MIR") {
  std::mt19937_64 rng(37);
  const FrequencyGrid g(257);
  for (int rep = 0; rep < 20; ++rep) {
    const auto model = oracle::random_stable_var(rng, 3, 1 + rep % 3, 0.8);
    const auto s = var_to_spectrum(model, g);
    const auto i1 = spectral_mir_profile(s, kX1, 2);
    const auto i2 = spectral_mir_profile(s, kX2, 2);
    const auto i12 = spectral_mir_profile(s, kX12, 2);
    for (std::size_t k = 0; k < g.size(); ++k) {
      CHECK(i1[k] >= -1e-10);
      CHECK(i2[k] >= -1e-10);
      CHECK(i12[k] >= std::max(i1[k], i2[k]) - 1e-10);
    }
  }
}
