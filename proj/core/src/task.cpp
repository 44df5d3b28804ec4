#include "shuttle/task.hpp"

#include <cmath>

#include "shuttle/error.hpp"

namespace shuttle {

TransportTask::TransportTask(double mass, double omega, double distance, double duration,
                             UnitSystem units)
    : mass_(mass), omega_(omega), distance_(distance), duration_(duration), units_(units) {
  require(std::isfinite(mass) && mass > 0, "mass must be finite and positive");
  require(std::isfinite(omega) && omega > 0, "omega must be finite and positive");
  require(std::isfinite(distance) && distance >= 0, "distance must be finite and non-negative");
  require(std::isfinite(duration) && duration > 0, "duration must be finite and positive");
}

TransportTask TransportTask::with_duration(double duration) const {
  return TransportTask(mass_, omega_, distance_, duration, units_);
}

TransportTask TransportTask::with_omega(double omega) const {
  return TransportTask(mass_, omega, distance_, duration_, units_);
}

TransportTask TransportTask::with_distance(double distance) const {
  return TransportTask(mass_, omega_, distance, duration_, units_);
}

double TransportTask::energy_scale() const noexcept {
  return 0.5 * mass_ * omega_ * omega_ * distance_ * distance_;
}

}  // namespace shuttle
