#pragma once

#include <Eigen/Dense>
#include <array>

#include "sblimp/params.hpp"

namespace sblimp {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using RowVec2 = Eigen::RowVector2d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Planar pose and twist. position = [x, z]; pitch is stored unwrapped (no
// modular reduction) so large excursions remain detectable.
struct PlanarState {
  Vec2 position{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
  double pitch = 0.0;
  double pitch_rate = 0.0;

  bool finite() const;
  Vec6 to_vector() const;
  static PlanarState from_vector(const Vec6& y);
};

// Thrust pair [f1, f2] with per-rotor saturation flags. saturated[i] is true
// iff the pre-clamp value lay outside [thrust_min, thrust_max].
struct RotorCommand {
  Vec2 thrust{0.0, 0.0};
  std::array<bool, 2> saturated{false, false};

  bool any_saturated() const { return saturated[0] || saturated[1]; }
};

// Net force and pitch torque in the body frame. Exactly linear in the
// commanded thrusts for fixed params.
struct BodyWrench {
  Vec2 force{0.0, 0.0};
  double torque = 0.0;
};

// 2-D rotation by the pitch angle (body to world).
Mat2 rotation(double pitch);

// Maps the thrust pair to body force: [[sin t, -sin t], [cos t, cos t]].
// Invertible iff tilt != 0 (|tilt| < pi/2 is a params invariant).
Mat2 thrust_force_matrix(const DesignParams& p);

// Maps the thrust pair to pitch torque; the two entries are exact negatives.
RowVec2 thrust_torque_matrix(const DesignParams& p);

// c = rotor_offset_z - rotor_offset_x / tan(tilt). Satisfies
// thrust_torque_matrix == [c, 0] * thrust_force_matrix exactly, so torque is
// slaved to the body-x force. Throws DegenerateDesignError when tilt == 0.
double coupling_coefficient(const DesignParams& p);

BodyWrench body_wrench(const DesignParams& p, const RotorCommand& u);

// Restoring torque from the high center of lift: -f_b * L_b * sin(pitch).
double buoyancy_torque(const DesignParams& p, double pitch);

// Newton-Euler time derivative of the planar state under command u:
//   m dv = -D v + (f_b - m g) zhat + R(pitch) A_f u,
//   J dpitch_rate = -d_tau pitch_rate + buoyancy torque + A_tau u.
// Returned as a PlanarState holding rates.
PlanarState state_derivative(const DesignParams& p, const PlanarState& s,
                             const RotorCommand& u);

// Pendulum mechanical energy 0.5 J w^2 + f_b L_b (1 - cos pitch).
double pendulum_energy(const DesignParams& p, const PlanarState& s);

}  // namespace sblimp
