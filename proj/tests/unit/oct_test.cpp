#include <gtest/gtest.h>

#include <cmath>

#include "shuttle/error.hpp"
#include "shuttle/fourier.hpp"
#include "shuttle/oct.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

TEST(BangBang, MinimumDurationClosedForm) {
  for (double d : {0.5, 1.0, 4.0}) {
    for (double delta : {0.1, 0.25}) {
      const TransportTask task(1.0, 2.0, d, 10.0);
      const auto r = min_time_bang_bang(task, delta);
      EXPECT_NEAR(r.min_duration, (2.0 / 2.0) * std::sqrt(d / delta), 1e-12);
      EXPECT_LT(r.verified_excess, 1e-16);
      ASSERT_TRUE(r.trap.has_value());
    }
  }
}

TEST(BangBang, LagSaturatesTheBound) {
  const TransportTask task(1.0, 1.0, 1.0, 10.0);
  const auto r = min_time_bang_bang(task, 0.25);
  const double tf = r.min_duration;
  double worst = 0;
  for (int i = 1; i < 400; ++i) {
    const double t = tf * i / 400.0;
    worst = std::max(worst, std::abs(r.trap->at(t).position - r.reference->at(t).position));
  }
  EXPECT_NEAR(worst, 0.25, 1e-12);
}

TEST(BangBang, TransformRouteAgreesWithIntegration) {
  // The Fourier route is independent of the integrator used for verified_excess.
  const TransportTask task(1.0, 1.0, 1.0, 10.0);
  const auto r = min_time_bang_bang(task, 0.25);
  const double e = excitation_from_transform(1.0, acceleration_transform(*r.trap, 1.0));
  EXPECT_LT(e / task.energy_scale(), 1e-20);
}

TEST(BangBang, ZeroDistanceNeedsNoTime) {
  const TransportTask task(1.0, 1.0, 0.0, 1.0);
  const auto r = min_time_bang_bang(task, 0.25);
  EXPECT_EQ(r.min_duration, 0.0);
  EXPECT_FALSE(r.trap.has_value());
}

TEST(Smooth, FeasibleDurationReturnsTheQuintic) {
  const TransportTask task(1.0, 1.0, 1.0, 8.0);
  const auto r = constrained_smooth(task, {0.25, std::nullopt, std::nullopt});
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.reference.degree(), 5);
  EXPECT_GT(r.slack, 0.0);
  EXPECT_LE(r.max_relative_displacement, 0.25);
}

TEST(Smooth, BelowBangBangLimitIsInfeasible) {
  const TransportTask task(1.0, 1.0, 1.0, 3.9);
  SmoothOptions options;
  options.restarts = 2;
  const auto r = constrained_smooth(task, {0.25, std::nullopt, std::nullopt}, options);
  EXPECT_FALSE(r.feasible);
  ASSERT_TRUE(r.min_feasible_duration.has_value());
  EXPECT_GE(*r.min_feasible_duration, 4.0 * (1 - 1e-3));
}

TEST(Smooth, RejectsNonPositiveBounds) {
  const TransportTask task(1.0, 1.0, 1.0, 8.0);
  EXPECT_THROW(constrained_smooth(task, {0.0, std::nullopt, std::nullopt}), InvalidArgument);
}

TEST(Robust, NeverWorseThanTheQuinticSeed) {
  const TransportTask task(1.0, 1.0, 1.0, 8.0);
  RobustCostWeights w;
  w.frequency_window = 1.0;
  RobustOptions options;
  options.restarts = 1;
  options.max_iterations = 200;
  const auto r = optimize_robust_cost(task, w, options);
  EXPECT_LE(r.cost.total, r.seed_cost.total);
  EXPECT_LT(r.nominal_excess, 1e-8);
  EXPECT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
}

TEST(Robust, AnharmonicTermNeedsGaussian) {
  const TransportTask task(1.0, 1.0, 1.0, 8.0);
  RobustCostWeights w;
  w.anharmonic_energy = 1.0;
  EXPECT_THROW(optimize_robust_cost(task, w), InvalidArgument);
}

}  // namespace
}  // namespace shuttle
