#pragma once

#include <functional>
#include <vector>

#include "sblimp/model.hpp"
#include "sblimp/params.hpp"

namespace sblimp {

// Proportional velocity law: K_v (v_d - v), N. Depends on nothing but the
// velocity error, so the controller stays attitude-free.
Vec2 auxiliary_input(const ControllerGains& g, const Vec2& v_desired,
                     const Vec2& v);

// Static feedback linearization. Given a commanded acceleration w, returns
// the raw (pre-clamp) thrust pair
//   u = m A_f^-1 R(pitch)^T ((g - f_b/m) zhat + w),
// which cancels gravity, buoyancy, and attitude so the drag-free plant obeys
// dv = w exactly. Throws DegenerateDesignError when tilt == 0 and
// std::invalid_argument on non-finite inputs.
Vec2 feedback_linearize(const DesignParams& p, double pitch, const Vec2& w);

// Clips each thrust to [thrust_min, thrust_max] and flags saturation.
// Idempotent.
RotorCommand clamp(const DesignParams& p, const Vec2& raw_thrust);

// Full velocity controller: feedback-linearize the proportional force demand,
// then clamp. Output depends only on (pitch, v, v_desired). The closed loop
// with the unsaturated command is m dv = K_v (v_d - v) - D v per axis.
RotorCommand velocity_command(const DesignParams& p, const ControllerGains& g,
                              double pitch, const Vec2& v_desired,
                              const Vec2& v);

// Exact solution of the closed-loop velocity dynamics per axis:
//   v(t) = k/(k+d) v_d + (v0 - k/(k+d) v_d) exp(-(k+d) t / m).
// Analytic oracle for simulator tests.
Vec2 closed_form_velocity(const DesignParams& p, const ControllerGains& g,
                          const Vec2& v_desired, const Vec2& v0, double t);

struct PitchSample {
  double t;
  double pitch;
  double pitch_rate;
};

// Small-pitch closed-loop pitch model driven by a velocity-error history:
//   J dw = c (e_x K_x + pitch K_z e_z) + c (m g - f_b) pitch
//          - d_tau w - f_b L_b pitch,
// the first-order expansion of the full torque c (R(pitch)^T F)_x with
// F = (m g - f_b) zhat + K_v e. Verification reference only, not part of the
// control loop. velocity_error(t) must be defined on [0, duration].
std::vector<PitchSample> linearized_pitch_response(
    const DesignParams& p, const ControllerGains& g,
    const std::function<Vec2(double)>& velocity_error, double pitch0,
    double pitch_rate0, double dt, double duration);

}  // namespace sblimp
