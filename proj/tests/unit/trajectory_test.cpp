#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shuttle/error.hpp"
#include "shuttle/trajectory.hpp"

namespace shuttle {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(BoundaryPolynomial, FrozenCoefficients) {
  const TransportTask task(1.0, 1.0, 2.0, 5.0);
  const std::vector<std::vector<double>> expected = {
      {0, 0, 3, -2},                         // k = 1
      {0, 0, 0, 10, -15, 6},                 // k = 2
      {0, 0, 0, 0, 35, -84, 70, -20},        // k = 3
  };
  for (int k = 1; k <= 3; ++k) {
    const PolyPath p = solve_boundary_polynomial(task, k);
    const auto& e = expected[static_cast<std::size_t>(k - 1)];
    ASSERT_EQ(p.coefficients().size(), e.size());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(p.coefficients()[i], 2.0 * e[i], 1e-9) << k << ' ' << i;
  }
  EXPECT_THROW(solve_boundary_polynomial(task, 0), InvalidArgument);
  EXPECT_THROW(solve_boundary_polynomial(task, 4), InvalidArgument);
}

TEST(BoundaryPolynomial, EndpointDerivativesVanish) {
  const TransportTask task(1.0, 1.0, 1.0, 3.0);
  for (int k = 1; k <= 3; ++k) {
    const PolyPath p = solve_boundary_polynomial(task, k);
    EXPECT_NEAR(p.position(0), 0.0, 1e-14);
    EXPECT_NEAR(p.position(3.0), 1.0, 1e-12);
    for (int r = 1; r <= k; ++r) {
      EXPECT_NEAR(p.derivative(r, 0.0), 0.0, 1e-10);
      EXPECT_NEAR(p.derivative(r, 3.0), 0.0, 1e-10);
    }
  }
}

TEST(InverseEngineering, TrapSatisfiesForcedOscillator) {
  const TransportTask task(1.0, 1.7, 1.0, 4.0);
  const PolyPath ref = solve_boundary_polynomial(task, 2);
  const PolyPath trap = trap_from_reference(ref, task);
  const double w2 = 1.7 * 1.7;
  for (double t = 0; t <= 4.0; t += 0.25) {
    EXPECT_NEAR(ref.acceleration(t) + w2 * ref.position(t), w2 * trap.position(t), 1e-12);
  }
  EXPECT_THROW(trap_from_reference(trap, task), InvalidArgument);
}

TEST(InverseEngineering, ReferenceFromTrapRecoversReference) {
  const TransportTask task(1.0, 1.0, 1.0, 2 * kPi);
  const PolyPath ref = solve_boundary_polynomial(task, 2);
  const SampledPath back = reference_from_trap(trap_from_reference(ref, task), task);
  for (std::size_t i = 0; i < back.size(); i += 100) {
    EXPECT_NEAR(back.positions()[i], ref.position(back.time(i)), 1e-9);
  }
  EXPECT_THROW(reference_from_trap(TrapPath(ref.with_role(PathRole::Trap)), task, {}, 50), InvalidArgument);
}

TEST(InverseEngineering, ShiftedTrajectoryAddsAccelerationTerm) {
  const PolyPath trap({0, 0, 0, 10, -15, 6}, 3.0, PathRole::Trap);
  const PolyPath shifted = shifted_trajectory(trap, 2.0);
  for (double t : {0.0, 1.0, 2.2}) EXPECT_NEAR(shifted.position(t), trap.position(t) + trap.acceleration(t) / 4.0, 1e-13);
}

TEST(Scales, BoundsAndDefaults) {
  const TransportTask task(2.0, 3.0, 4.0, 5.0);
  EXPECT_DOUBLE_EQ(peak_acceleration_bound(task), 8.0 / 25.0);
  EXPECT_NEAR(adiabatic_timescale(task), std::sqrt(2.0 * 16.0 / (2.0 * 3.0)), 1e-14);
  EXPECT_EQ(default_integration_steps(1.0, 1.0), 2000u);
  EXPECT_EQ(default_integration_steps(1.0, 200 * kPi), 20000u);
  EXPECT_DOUBLE_EQ(task.energy_scale(), 0.5 * 2.0 * 9.0 * 16.0);
}

TEST(BoundaryPolynomialProperty, PeakAccelerationNeverBelowBound) {
  for (double tf : {0.5, 1.0, 7.0}) {
    for (double d : {0.1, 1.0, 3.0}) {
      const TransportTask task(1.0, 1.0, d, tf);
      for (int k = 1; k <= 3; ++k) {
        const PolyPath p = solve_boundary_polynomial(task, k);
        double peak = 0;
        for (int i = 0; i <= 1000; ++i) peak = std::max(peak, std::abs(p.acceleration(tf * i / 1000.0)));
        EXPECT_GE(peak, peak_acceleration_bound(task) * (1 - 1e-12));
      }
    }
  }
}

TEST(UnitSystem, SiScalesGiveDimensionlessHbar) {
  const UnitSystem u = UnitSystem::from_si_scales(1e-6, 1e-6, 1.6e-25);
  EXPECT_FALSE(u.is_natural());
  EXPECT_NEAR(u.hbar(), kHbarSI * 1e-6 / (1.6e-25 * 1e-12), 1e-20);
  EXPECT_DOUBLE_EQ(u.to_si_length(2.0), 2e-6);
  EXPECT_DOUBLE_EQ(UnitSystem::natural().hbar(), 1.0);
}

}  // namespace
}  // namespace shuttle
