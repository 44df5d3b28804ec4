#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shuttle/error.hpp"
#include "shuttle/path.hpp"

namespace shuttle {
namespace {

TEST(PolyPath, DerivativesMatchHornerOracle) {
  const std::vector<double> c = {0.3, -1.0, 2.0, 0.5, -0.25, 0.125};
  const double tf = 2.5;
  const PolyPath p(c, tf, PathRole::Trap);
  const auto d1 = oracle::poly_derivative(c);
  const auto d2 = oracle::poly_derivative(d1);
  for (double t : {0.0, 0.3, 1.1, 2.5}) {
    const double s = t / tf;
    EXPECT_NEAR(p.position(t), oracle::poly(c, s), 1e-14);
    EXPECT_NEAR(p.velocity(t), oracle::poly(d1, s) / tf, 1e-13);
    EXPECT_NEAR(p.acceleration(t), oracle::poly(d2, s) / (tf * tf), 1e-13);
    EXPECT_NEAR(p.derivative(2, t), p.acceleration(t), 1e-13);
  }
}

TEST(PolyPath, RejectsInvalidInput) {
  EXPECT_THROW(PolyPath({}, 1.0, PathRole::Trap), InvalidArgument);
  EXPECT_THROW(PolyPath({1.0}, 0.0, PathRole::Trap), InvalidArgument);
  EXPECT_THROW(PolyPath(std::vector<double>(kMaxPolynomialDegree + 2, 1.0), 1.0, PathRole::Trap),
               InvalidArgument);
  EXPECT_THROW(PolyPath({NAN}, 1.0, PathRole::Trap), InvalidArgument);
}

TEST(PolyPath, ScaledAndRoleCopies) {
  const PolyPath p({0, 1, 2}, 3.0, PathRole::Reference);
  const PolyPath q = p.scaled(2.0);
  EXPECT_DOUBLE_EQ(q.position(1.5), 2.0 * p.position(1.5));
  EXPECT_EQ(p.with_role(PathRole::Trap).role(), PathRole::Trap);
  EXPECT_DOUBLE_EQ(p.end_value(), 3.0);
}

TEST(SampledPath, HermiteInterpolationIsExactForCubics) {
  const PolyPath p({0.1, 0.4, -0.7, 0.9}, 2.0, PathRole::Trap);
  const SampledPath s = SampledPath::from(p, 11);
  for (double t : {0.05, 0.77, 1.31, 1.99}) {
    EXPECT_NEAR(s.at(t).position, p.position(t), 1e-13);
    EXPECT_NEAR(s.at(t).velocity, p.velocity(t), 1e-12);
  }
  EXPECT_FALSE(s.has_interior_jumps());
}

TEST(PiecewisePath, ReportsEveryJumpIncludingRest) {
  // Rest at 0, jump to 0.5 at t = 0, hold, drop to 1 at t = 1 and stay.
  const PiecewisePath p({0.0, 1.0, 2.0}, {{0.5}, {0.8}}, 0.0, 1.0);
  const auto jumps = p.jumps();
  ASSERT_EQ(jumps.size(), 3u);
  EXPECT_DOUBLE_EQ(jumps[0].position_jump, 0.5);
  EXPECT_DOUBLE_EQ(jumps[1].time, 1.0);
  EXPECT_NEAR(jumps[1].position_jump, 0.3, 1e-15);
  EXPECT_NEAR(jumps[2].position_jump, 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(initial_position(TrapPath(p)), 0.0);
  EXPECT_DOUBLE_EQ(final_position(TrapPath(p)), 1.0);
}

TEST(PiecewisePath, StepAlignmentHitsEveryKnot) {
  const TrapPath p = PiecewisePath({0.0, 1.0, 3.0}, {{0.0}, {1.0}}, 0.0, 1.0);
  const std::size_t m = align_steps_to_breakpoints(p, 100);
  EXPECT_GE(m, 100u);
  EXPECT_EQ(m % 3, 0u);
  SegmentCursor cursor(p);
  const double h = 3.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = h * static_cast<double>(i);
    EXPECT_EQ(cursor.advance(t), t < 1.0 - 1e-12 ? 0u : 1u);
  }
}

TEST(TrapPathProperty, SampledAndPolyAgreeOnRandomPaths) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::random_rest_to_rest(rng, 1.0, trial % 4);
    const PolyPath p(c, 3.0, PathRole::Trap);
    const SampledPath s = sample(TrapPath(p), 2001);
    for (std::size_t i = 0; i < s.size(); i += 97) {
      EXPECT_NEAR(s.positions()[i], p.position(s.time(i)), 1e-12);
      EXPECT_NEAR(s.accelerations()[i], p.acceleration(s.time(i)), 1e-10);
    }
  }
}

}  // namespace
}  // namespace shuttle
