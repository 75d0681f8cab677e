#include "sblimp/params.hpp"

#include <cmath>

namespace sblimp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void validate(const DesignParams& p) {
  require(std::isfinite(p.mass) && p.mass > 0, "mass must be > 0");
  require(std::isfinite(p.gravity) && p.gravity > 0, "gravity must be > 0");
  require(std::isfinite(p.buoyancy) && p.buoyancy > 0, "buoyancy must be > 0");
  require(std::isfinite(p.buoyancy_arm) && p.buoyancy_arm > 0,
          "buoyancy_arm must be > 0");
  require(std::isfinite(p.inertia_pitch) && p.inertia_pitch > 0,
          "inertia_pitch must be > 0");
  require(std::isfinite(p.rotor_offset_x) && p.rotor_offset_x > 0,
          "rotor_offset_x must be > 0");
  require(std::isfinite(p.rotor_offset_z) && p.rotor_offset_z < 0,
          "rotor_offset_z must be < 0");
  require(std::isfinite(p.tilt) && std::abs(p.tilt) < std::numbers::pi / 2,
          "tilt must lie in (-pi/2, pi/2)");
  require(std::isfinite(p.drag_x) && p.drag_x > 0, "drag_x must be > 0");
  require(std::isfinite(p.drag_z) && p.drag_z > 0, "drag_z must be > 0");
  require(std::isfinite(p.drag_pitch) && p.drag_pitch > 0,
          "drag_pitch must be > 0");
  require(std::isfinite(p.limits.thrust_min) && p.limits.thrust_min >= 0,
          "thrust_min must be >= 0");
  require(std::isfinite(p.limits.thrust_max) &&
              p.limits.thrust_max > p.limits.thrust_min,
          "thrust_max must exceed thrust_min");
}

void validate(const ControllerGains& g) {
  require(std::isfinite(g.k_vx) && g.k_vx > 0, "k_vx must be > 0");
  require(std::isfinite(g.k_vz) && g.k_vz > 0, "k_vz must be > 0");
}

double buoyancy_deficit(const DesignParams& p) {
  return p.mass * p.gravity - p.buoyancy;
}

double hover_thrust(const DesignParams& p) {
  return buoyancy_deficit(p) / (2.0 * std::cos(p.tilt));
}

double critical_mass(const DesignParams& p) {
  return (p.buoyancy + 2.0 * p.limits.thrust_max * std::cos(p.tilt)) /
         p.gravity;
}

double neutral_buoyancy_mass(const DesignParams& p) {
  return p.buoyancy / p.gravity;
}

}  // namespace sblimp
