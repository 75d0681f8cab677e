#include "sblimp/controller.hpp"

#include <cmath>

namespace sblimp {

Vec2 auxiliary_input(const ControllerGains& g, const Vec2& v_desired,
                     const Vec2& v) {
  return Vec2{g.k_vx * (v_desired.x() - v.x()),
              g.k_vz * (v_desired.y() - v.y())};
}

Vec2 feedback_linearize(const DesignParams& p, double pitch, const Vec2& w) {
  if (p.tilt == 0.0)
    throw DegenerateDesignError(
        "zero rotor tilt makes the thrust allocation singular");
  if (!std::isfinite(pitch) || !w.allFinite())
    throw std::invalid_argument("non-finite controller input");
  const Vec2 demand{w.x(), p.gravity - p.buoyancy / p.mass + w.y()};
  // A_f^-1 written out: det = 2 sin(tilt) cos(tilt).
  const double s = std::sin(p.tilt), c = std::cos(p.tilt);
  const Vec2 body = rotation(pitch).transpose() * (p.mass * demand);
  return Vec2{body.x() / (2.0 * s) + body.y() / (2.0 * c),
              -body.x() / (2.0 * s) + body.y() / (2.0 * c)};
}

RotorCommand clamp(const DesignParams& p, const Vec2& raw_thrust) {
  RotorCommand cmd;
  for (int i = 0; i < 2; ++i) {
    const double f = raw_thrust[i];
    const double clipped =
        std::min(std::max(f, p.limits.thrust_min), p.limits.thrust_max);
    cmd.thrust[i] = clipped;
    cmd.saturated[i] = f != clipped;
  }
  return cmd;
}

RotorCommand velocity_command(const DesignParams& p, const ControllerGains& g,
                              double pitch, const Vec2& v_desired,
                              const Vec2& v) {
  const Vec2 w = auxiliary_input(g, v_desired, v) / p.mass;
  return clamp(p, feedback_linearize(p, pitch, w));
}

Vec2 closed_form_velocity(const DesignParams& p, const ControllerGains& g,
                          const Vec2& v_desired, const Vec2& v0, double t) {
  const double k[2] = {g.k_vx, g.k_vz};
  const double d[2] = {p.drag_x, p.drag_z};
  Vec2 v;
  for (int i = 0; i < 2; ++i) {
    const double vss = k[i] / (k[i] + d[i]) * v_desired[i];
    v[i] = vss + (v0[i] - vss) * std::exp(-(k[i] + d[i]) * t / p.mass);
  }
  return v;
}

std::vector<PitchSample> linearized_pitch_response(
    const DesignParams& p, const ControllerGains& g,
    const std::function<Vec2(double)>& velocity_error, double pitch0,
    double pitch_rate0, double dt, double duration) {
  const double c = coupling_coefficient(p);
  const double deficit = buoyancy_deficit(p);
  const double stiffness = p.buoyancy * p.buoyancy_arm - c * deficit;
  const auto accel = [&](double t, double th, double w) {
    const Vec2 e = velocity_error(t);
    const double torque = c * (g.k_vx * e.x() + th * g.k_vz * e.y()) -
                          stiffness * th - p.drag_pitch * w;
    return torque / p.inertia_pitch;
  };
  std::vector<PitchSample> out;
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  out.reserve(steps + 1);
  double th = pitch0, w = pitch_rate0;
  out.push_back({0.0, th, w});
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    const double k1t = w, k1w = accel(t, th, w);
    const double k2t = w + 0.5 * dt * k1w,
                 k2w = accel(t + 0.5 * dt, th + 0.5 * dt * k1t,
                             w + 0.5 * dt * k1w);
    const double k3t = w + 0.5 * dt * k2w,
                 k3w = accel(t + 0.5 * dt, th + 0.5 * dt * k2t,
                             w + 0.5 * dt * k2w);
    const double k4t = w + dt * k3w,
                 k4w = accel(t + dt, th + dt * k3t, w + dt * k3w);
    th += dt / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t);
    w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    out.push_back({static_cast<double>(n + 1) * dt, th, w});
  }
  return out;
}

}  // namespace sblimp
