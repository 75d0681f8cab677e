#include "sblimp/model.hpp"

#include <cmath>

namespace sblimp {

bool PlanarState::finite() const {
  return position.allFinite() && velocity.allFinite() &&
         std::isfinite(pitch) && std::isfinite(pitch_rate);
}

Vec6 PlanarState::to_vector() const {
  Vec6 y;
  y << position.x(), position.y(), pitch, velocity.x(), velocity.y(),
      pitch_rate;
  return y;
}

PlanarState PlanarState::from_vector(const Vec6& y) {
  PlanarState s;
  s.position = {y[0], y[1]};
  s.pitch = y[2];
  s.velocity = {y[3], y[4]};
  s.pitch_rate = y[5];
  return s;
}

Mat2 rotation(double pitch) {
  const double c = std::cos(pitch), s = std::sin(pitch);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Mat2 thrust_force_matrix(const DesignParams& p) {
  const double s = std::sin(p.tilt), c = std::cos(p.tilt);
  Mat2 a;
  a << s, -s, c, c;
  return a;
}

RowVec2 thrust_torque_matrix(const DesignParams& p) {
  const double s = std::sin(p.tilt), c = std::cos(p.tilt);
  const double lever = p.rotor_offset_z * s - p.rotor_offset_x * c;
  return RowVec2{lever, -lever};
}

double coupling_coefficient(const DesignParams& p) {
  if (p.tilt == 0.0)
    throw DegenerateDesignError(
        "zero rotor tilt makes the thrust allocation singular");
  return p.rotor_offset_z - p.rotor_offset_x / std::tan(p.tilt);
}

BodyWrench body_wrench(const DesignParams& p, const RotorCommand& u) {
  BodyWrench w;
  w.force = thrust_force_matrix(p) * u.thrust;
  w.torque = thrust_torque_matrix(p) * u.thrust;
  return w;
}

double buoyancy_torque(const DesignParams& p, double pitch) {
  return -p.buoyancy * p.buoyancy_arm * std::sin(pitch);
}

PlanarState state_derivative(const DesignParams& p, const PlanarState& s,
                             const RotorCommand& u) {
  const BodyWrench w = body_wrench(p, u);
  const Vec2 drag{p.drag_x * s.velocity.x(), p.drag_z * s.velocity.y()};
  const Vec2 net_lift{0.0, p.buoyancy - p.mass * p.gravity};
  PlanarState d;
  d.position = s.velocity;
  d.velocity = (-drag + net_lift + rotation(s.pitch) * w.force) / p.mass;
  d.pitch = s.pitch_rate;
  d.pitch_rate = (-p.drag_pitch * s.pitch_rate + buoyancy_torque(p, s.pitch) +
                  w.torque) /
                 p.inertia_pitch;
  return d;
}

double pendulum_energy(const DesignParams& p, const PlanarState& s) {
  return 0.5 * p.inertia_pitch * s.pitch_rate * s.pitch_rate +
         p.buoyancy * p.buoyancy_arm * (1.0 - std::cos(s.pitch));
}

}  // namespace sblimp
