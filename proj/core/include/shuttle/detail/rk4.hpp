#pragma once

#include <array>
#include <cstddef>

namespace shuttle::detail {

using Phase = std::array<double, 2>;

/// One classical fourth-order Runge-Kutta step for a two-component system.
template <class Rhs>
Phase rk4_step(const Phase& y, double t, double h, Rhs&& rhs) {
  const auto axpy = [](const Phase& a, double s, const Phase& b) {
    return Phase{a[0] + s * b[0], a[1] + s * b[1]};
  };
  const Phase k1 = rhs(t, y);
  const Phase k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const Phase k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const Phase k4 = rhs(t + h, axpy(y, h, k3));
  return {y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

}  // namespace shuttle::detail
