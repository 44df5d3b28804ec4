#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "shuttle/error.hpp"
#include "shuttle/noise.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

constexpr double kPi = std::numbers::pi;

double mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

TEST(Generators, OuHasStationaryVarianceAndExactLagCorrelation) {
  const double dt = 0.05, tau = 0.8, c = 2.5;
  const auto x = generate_ou(dt, 400000, c, tau, 7);
  EXPECT_NEAR(variance(x), c, 0.05 * c);
  double num = 0, den = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    num += x[i] * x[i - 1];
    den += x[i - 1] * x[i - 1];
  }
  EXPECT_NEAR(num / den, std::exp(-dt / tau), 3e-3);
}

TEST(Generators, WhiteVarianceScalesWithStep) {
  const auto x = generate_white(0.01, 200000, 0.3, 3);
  EXPECT_NEAR(variance(x), 30.0, 0.6);
  EXPECT_NEAR(mean(x), 0.0, 0.05);
}

TEST(Generators, ZeroIntensityGivesZerosAndSeedsAreReproducible) {
  for (double v : generate_white(0.1, 100, 0.0, 1)) EXPECT_EQ(v, 0.0);
  for (double v : generate_ou(0.1, 100, 0.0, 1.0, 1)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(generate_ou(0.1, 100, 1.0, 1.0, 42), generate_ou(0.1, 100, 1.0, 1.0, 42));
  EXPECT_NE(generate_ou(0.1, 100, 1.0, 1.0, 42), generate_ou(0.1, 100, 1.0, 1.0, 43));
}

TEST(Generators, NearbyEnsembleSeedsDoNotShareRealizations) {
  std::set<std::uint64_t> a, b;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    a.insert(realization_seed(1, i));
    b.insert(realization_seed(2, i));
  }
  EXPECT_EQ(a.size(), 1000u);
  for (auto s : b) EXPECT_EQ(a.count(s), 0u);
}

TEST(Psd, AnalyticForms) {
  EXPECT_DOUBLE_EQ(analytic_psd(WhiteNoise{0.7}, 3.0), 0.7);
  EXPECT_DOUBLE_EQ(analytic_psd(OUNoise{2.0, 0.5}, 2.0), 2 * 2.0 * 0.5 / 2.0);
  EXPECT_TRUE(std::isinf(correlation_time(WhiteNoise{1.0})));
}

// Mean of estimate / analytic over the bins in [lo, hi]; single bins scatter by
// about 1 / sqrt(segments).
double band_ratio(const PsdEstimate& e, const NoiseKind& kind, double lo, double hi) {
  double sum = 0;
  int n = 0;
  for (std::size_t i = 0; i < e.omega().size(); ++i) {
    if (e.omega()[i] < lo || e.omega()[i] > hi) continue;
    sum += e.power()[i] / analytic_psd(kind, e.omega()[i]);
    ++n;
  }
  return sum / n;
}

TEST(PsdProperty, WelchRecoversAnalyticDensity) {
  const double dt = 0.02;
  const WhiteNoise white{0.4};
  const auto xw = generate_white(dt, 1 << 18, white.intensity, 5);
  const PsdEstimate ew = psd_estimate(xw, dt);
  EXPECT_GE(ew.segments(), 8u);
  for (double w : {1.0, 10.0, 50.0}) EXPECT_NEAR(band_ratio(ew, white, w - 0.5, w + 0.5), 1.0, 0.1) << w;

  const OUNoise ou{1.0, 1.0};
  const auto x = generate_ou(dt, 1 << 18, ou.variance, ou.correlation_time, 9);
  const PsdEstimate eo = psd_estimate(x, dt);
  for (double w : {0.5, 1.0, 3.0}) EXPECT_NEAR(band_ratio(eo, ou, w - 0.2, w + 0.2), 1.0, 0.1) << w;
}

TEST(Psd, RejectsShortSeries) {
  const std::vector<double> x(20, 1.0);
  EXPECT_THROW(psd_estimate(x, 0.1), InvalidArgument);
}

TEST(Perturbation, TargetsMapToLatticeParameters) {
  const auto pos = perturbation_for(NoiseTarget::Position, 0.1, 2.0);
  EXPECT_DOUBLE_EQ(pos.phase_shift, -0.2);
  const auto amp = perturbation_for(NoiseTarget::Amplitude, 0.1, 2.0);
  EXPECT_DOUBLE_EQ(amp.amplitude_scale, 1.2);
  const auto k = perturbation_for(NoiseTarget::Wavenumber, 0.1, -2.0);
  EXPECT_DOUBLE_EQ(k.wavenumber_scale, 0.8);
  for (auto t : {NoiseTarget::Position, NoiseTarget::Amplitude, NoiseTarget::Wavenumber}) {
    EXPECT_EQ(noise_target_from_string(to_string(t)), t);
  }
}

TEST(Fit, PowerLawExponentIsExactOnPowerLaws) {
  const std::vector<double> x = {0.1, 0.2, 0.4, 0.8};
  std::vector<double> y;
  for (double v : x) y.push_back(3 * v * v);
  EXPECT_NEAR(fit_power_law_exponent(x, y), 2.0, 1e-12);
}

class Sensitivity : public ::testing::Test {
 protected:
  TransportTask task{1.0, 1.0, 0.5, 4 * kPi};
  PotentialModel lattice = PotentialModel::lattice(1.0, 0.5, 1.0);
  PolyPath trap = trap_from_reference(solve_boundary_polynomial(task, 2), task);

  NoiseModel white(double lambda) const {
    NoiseModel n;
    n.kind = WhiteNoise{0.01};
    n.lambda = lambda;
    n.seed = 17;
    return n;
  }
};

TEST_F(Sensitivity, ZeroLambdaReproducesTheBaselineExactly) {
  const auto r = monte_carlo_sensitivity(trap, lattice, white(0.0), 20);
  EXPECT_EQ(r.delta(), 0.0);
  EXPECT_EQ(r.standard_error, 0.0);
}

TEST_F(Sensitivity, DeterministicAcrossThreadCounts) {
  SensitivityOptions one, four;
  four.threads = 4;
  const auto a = monte_carlo_sensitivity(trap, lattice, white(0.01), 40, one);
  const auto b = monte_carlo_sensitivity(trap, lattice, white(0.01), 40, four);
  EXPECT_EQ(a.mean_excess_energy, b.mean_excess_energy);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST_F(Sensitivity, LambdaSquaredScaling) {
  std::vector<double> lambdas = {0.005, 0.01, 0.02}, deltas;
  for (double l : lambdas) deltas.push_back(monte_carlo_sensitivity(trap, lattice, white(l), 100).delta());
  EXPECT_NEAR(fit_power_law_exponent(lambdas, deltas), 2.0, 0.05);
}

TEST_F(Sensitivity, RejectsCoarseStepsForColouredNoise) {
  NoiseModel ou = white(0.01);
  ou.kind = OUNoise{1.0, 0.01};
  SensitivityOptions options;
  options.dt = 0.01;
  EXPECT_THROW(monte_carlo_sensitivity(trap, lattice, ou, 10, options), InvalidArgument);
}

TEST(Heating, SameSeedSameRate) {
  const PotentialModel lattice = PotentialModel::lattice(1.0, 0.5, 1.0);
  NoiseModel n;
  n.kind = OUNoise{1.0, 1.0};
  n.lambda = 0.01;
  n.seed = 3;
  HeatingOptions options;
  options.realizations = 20;
  options.duration = 40.0;
  const auto a = heating_rate(lattice, n, options);
  const auto b = heating_rate(lattice, n, options);
  EXPECT_EQ(a.rate, b.rate);
  EXPECT_GT(a.rate, 0.0);
  EXPECT_DOUBLE_EQ(a.psd, 1.0);
}

}  // namespace
}  // namespace shuttle
