#include "sblimp/spatial3d.hpp"

#include <cmath>
#include <stdexcept>

#include "sblimp/integrate.hpp"

namespace sblimp {

namespace {

using Vec10 = Eigen::Matrix<double, 10, 1>;

Vec10 to_vector(const SpatialState& s) {
  Vec10 y;
  y << s.position, s.pitch, s.roll, s.velocity, s.pitch_rate, s.roll_rate;
  return y;
}

SpatialState from_vector(const Vec10& y) {
  SpatialState s;
  s.position = y.segment<3>(0);
  s.pitch = y[3];
  s.roll = y[4];
  s.velocity = y.segment<3>(5);
  s.pitch_rate = y[8];
  s.roll_rate = y[9];
  return s;
}

}  // namespace

bool SpatialState::finite() const {
  return position.allFinite() && velocity.allFinite() &&
         std::isfinite(pitch) && std::isfinite(roll) &&
         std::isfinite(pitch_rate) && std::isfinite(roll_rate);
}

AllocationMatrix spatial_allocation(const DesignParams& p) {
  if (p.tilt == 0.0)
    throw DegenerateDesignError(
        "zero rotor tilt makes the thrust allocation singular");
  const double s = std::sin(p.tilt), c = std::cos(p.tilt);
  const double lever = p.rotor_offset_z * s - p.rotor_offset_x * c;
  AllocationMatrix a = AllocationMatrix::Zero();
  // Rows: f_x, f_y, f_z, torque_pitch, torque_roll.
  a(0, 0) = s;
  a(0, 1) = -s;
  a(1, 2) = s;
  a(1, 3) = -s;
  a(2, 0) = c;
  a(2, 1) = c;
  a(2, 2) = c;
  a(2, 3) = c;
  a(3, 0) = lever;
  a(3, 1) = -lever;
  a(4, 2) = lever;
  a(4, 3) = -lever;
  return a;
}

QuadCommand spatial_velocity_command(const DesignParams& p,
                                     const ControllerGains& g, double pitch,
                                     double roll, const Vec3& v_desired,
                                     const Vec3& v) {
  if (p.tilt == 0.0)
    throw DegenerateDesignError(
        "zero rotor tilt makes the thrust allocation singular");
  const double s = std::sin(p.tilt), c = std::cos(p.tilt);
  const Vec3 e = v_desired - v;
  // Each plane carries half of the vertical compensation and feedback so the
  // summed world force reproduces the planar control law.
  const double vertical = 0.5 * (buoyancy_deficit(p) + g.k_vz * e.z());
  const auto pair_raw = [&](double angle, double lateral_force) {
    const Vec2 body =
        rotation(angle).transpose() * Vec2{lateral_force, vertical};
    return Vec2{body.x() / (2.0 * s) + body.y() / (2.0 * c),
                -body.x() / (2.0 * s) + body.y() / (2.0 * c)};
  };
  const Vec2 xz = pair_raw(pitch, g.k_vx * e.x());
  const Vec2 yz = pair_raw(roll, g.k_vx * e.y());
  const RotorCommand c12 = clamp(p, xz);
  const RotorCommand c34 = clamp(p, yz);
  QuadCommand cmd;
  cmd.thrust << c12.thrust, c34.thrust;
  cmd.saturated = {c12.saturated[0], c12.saturated[1], c34.saturated[0],
                   c34.saturated[1]};
  return cmd;
}

ConstantVelocity3::ConstantVelocity3(const Vec3& velocity, const Vec3& start)
    : velocity_(velocity), start_(start) {}

SpatialSample ConstantVelocity3::at(double t, const SpatialState&) const {
  return {velocity_, start_ + t * velocity_};
}

CircleXY::CircleXY(double radius, double speed, const Vec3& start)
    : radius_(radius), speed_(speed), start_(start) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be > 0");
  if (!(speed > 0.0)) throw std::invalid_argument("circle speed must be > 0");
}

SpatialSample CircleXY::at(double t, const SpatialState&) const {
  const double phase = speed_ / radius_ * t;
  SpatialSample ref;
  ref.velocity = speed_ * Vec3{-std::sin(phase), std::cos(phase), 0.0};
  ref.position =
      start_ + radius_ * Vec3{std::cos(phase) - 1.0, std::sin(phase), 0.0};
  return ref;
}

Helix::Helix(double radius, double v0, double ramp, double climb_rate,
             const Vec3& start)
    : radius_(radius), v0_(v0), ramp_(ramp), climb_rate_(climb_rate),
      start_(start) {
  if (!(radius > 0.0)) throw std::invalid_argument("helix radius must be > 0");
  if (!(v0 > 0.0)) throw std::invalid_argument("helix speed must be > 0");
  if (climb_rate < 0.0)
    throw std::invalid_argument("climb rate must be >= 0");
}

SpatialSample Helix::at(double t, const SpatialState&) const {
  const double speed = v0_ + ramp_ * t;
  const double phase = (v0_ * t + 0.5 * ramp_ * t * t) / radius_;
  SpatialSample ref;
  ref.velocity =
      Vec3{-speed * std::sin(phase), speed * std::cos(phase), climb_rate_};
  ref.position = start_ + Vec3{radius_ * (std::cos(phase) - 1.0),
                               radius_ * std::sin(phase), climb_rate_ * t};
  return ref;
}

PlanarInXZ::PlanarInXZ(std::shared_ptr<const Trajectory> planar)
    : planar_(std::move(planar)) {
  if (!planar_) throw std::invalid_argument("null planar trajectory");
}

SpatialSample PlanarInXZ::at(double t, const SpatialState& s) const {
  PlanarState ps;
  ps.position = {s.position.x(), s.position.z()};
  ps.velocity = {s.velocity.x(), s.velocity.z()};
  ps.pitch = s.pitch;
  ps.pitch_rate = s.pitch_rate;
  const TrajectorySample planar = planar_->at(t, ps);
  return {{planar.velocity.x(), 0.0, planar.velocity.y()},
          {planar.position.x(), 0.0, planar.position.y()}};
}

namespace {

struct SpatialContext {
  const DesignParams& params;
  const ControllerGains& gains;
  const SimConfig& cfg;
  const SpatialTrajectory& traj;
  bool hold_active = false;
  QuadCommand held{};

  QuadCommand command_for(double t, const SpatialState& s) const {
    if (!cfg.actuation_enabled) return QuadCommand{};
    if (hold_active) return held;
    const SpatialSample ref = traj.at(t, s);
    return spatial_velocity_command(params, gains, s.pitch, s.roll,
                                    ref.velocity, s.velocity);
  }

  Vec10 derivative(double t, const Vec10& y) const {
    const SpatialState s = from_vector(y);
    const QuadCommand cmd = command_for(t, s);
    const double sn = std::sin(params.tilt), cs = std::cos(params.tilt);
    const double lever =
        params.rotor_offset_z * sn - params.rotor_offset_x * cs;
    // Plane forces in their own body axes.
    const Vec2 body_xz{sn * (cmd.thrust[0] - cmd.thrust[1]),
                       cs * (cmd.thrust[0] + cmd.thrust[1])};
    const Vec2 body_yz{sn * (cmd.thrust[2] - cmd.thrust[3]),
                       cs * (cmd.thrust[2] + cmd.thrust[3])};
    const Vec2 world_xz = rotation(s.pitch) * body_xz;
    const Vec2 world_yz = rotation(s.roll) * body_yz;
    const double torque_pitch = lever * (cmd.thrust[0] - cmd.thrust[1]);
    const double torque_roll = lever * (cmd.thrust[2] - cmd.thrust[3]);

    const Vec3 drag{params.drag_x * s.velocity.x(),
                    params.drag_x * s.velocity.y(),
                    params.drag_z * s.velocity.z()};
    const Vec3 net_lift{0.0, 0.0,
                        params.buoyancy - params.mass * params.gravity};
    const Vec3 thrust_world{world_xz.x(), world_yz.x(),
                            world_xz.y() + world_yz.y()};

    SpatialState d;
    d.position = s.velocity;
    d.velocity = (-drag + net_lift + thrust_world) / params.mass;
    d.pitch = s.pitch_rate;
    d.roll = s.roll_rate;
    d.pitch_rate = (-params.drag_pitch * s.pitch_rate +
                    buoyancy_torque(params, s.pitch) + torque_pitch) /
                   params.inertia_pitch;
    d.roll_rate = (-params.drag_pitch * s.roll_rate +
                   buoyancy_torque(params, s.roll) + torque_roll) /
                  params.inertia_pitch;
    if (cfg.pin_pitch) {
      d.pitch = 0.0;
      d.roll = 0.0;
      d.pitch_rate = 0.0;
      d.roll_rate = 0.0;
    }
    return to_vector(d);
  }

  SpatialState advance(double t, const SpatialState& s) const {
    const auto f = [this](double tt, const Vec10& y) {
      return derivative(tt, y);
    };
    const Vec10 y = to_vector(s);
    const Vec10 next = cfg.integrator == Integrator::rk4
                           ? detail::rk4_step(y, t, cfg.dt, f)
                           : detail::euler_step(y, t, cfg.dt, f);
    return from_vector(next);
  }
};

SpatialRecord make_record(double t, const SpatialState& s,
                          const QuadCommand& cmd, const SpatialSample& ref) {
  SpatialRecord r;
  r.t = t;
  r.state = s;
  r.command = cmd;
  r.velocity_ref = ref.velocity;
  r.position_ref = ref.position;
  r.velocity_error = ref.velocity - s.velocity;
  r.position_error = ref.position - s.position;
  r.pitch_error = s.pitch;
  r.roll_error = s.roll;
  return r;
}

}  // namespace

SpatialState spatial_step(const DesignParams& p, const ControllerGains& g,
                          const SimConfig& c, const SpatialState& s,
                          const Vec3& v_desired) {
  validate(p);
  validate(g);
  validate(c);
  ConstantVelocity3 traj(v_desired, s.position);
  SpatialContext ctx{p, g, c, traj};
  if (c.controller_rate_hz > 0.0) {
    ctx.held = ctx.command_for(0.0, s);
    ctx.hold_active = true;
  }
  return ctx.advance(0.0, s);
}

SimLog planar_metric_view(const SpatialLog& log) {
  SimLog view;
  view.diverged = log.diverged;
  view.divergence_reason = log.divergence_reason;
  view.dt = log.dt;
  view.decimate = log.decimate;
  view.steps_executed = log.steps_executed;
  view.steps_saturated = log.steps_saturated;
  view.duration_completed = log.duration_completed;
  view.records.reserve(log.records.size());
  for (const SpatialRecord& r : log.records) {
    SimRecord rec;
    rec.t = r.t;
    rec.state.position = {r.state.position.x(), r.state.position.z()};
    rec.state.velocity = {r.state.velocity.x(), r.state.velocity.z()};
    rec.state.pitch = r.state.pitch;
    rec.state.pitch_rate = r.state.pitch_rate;
    rec.velocity_ref = {r.velocity_ref.norm(), 0.0};
    rec.position_ref = {r.position_ref.norm(), 0.0};
    rec.velocity_error = {r.velocity_error.norm(), 0.0};
    rec.position_error = {r.position_error.norm(), 0.0};
    rec.angular_error = std::abs(r.pitch_error) >= std::abs(r.roll_error)
                            ? r.pitch_error
                            : r.roll_error;
    rec.command.saturated = {r.command.any_saturated(), false};
    view.records.push_back(rec);
  }
  return view;
}

SpatialLog spatial_run(const DesignParams& p, const ControllerGains& g,
                       const SimConfig& c, const SpatialTrajectory& trajectory,
                       const SpatialState& initial) {
  validate(p);
  validate(g);
  validate(c);
  if (!initial.finite())
    throw std::invalid_argument("initial state must be finite");

  const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
  if (steps == 0) throw std::invalid_argument("duration must cover one step");

  SpatialLog log;
  log.dt = c.dt;
  log.decimate = c.decimate;
  log.records.reserve(steps / static_cast<std::size_t>(c.decimate) + 2);

  SpatialContext ctx{p, g, c, trajectory};
  const double sample_period =
      c.controller_rate_hz > 0.0 ? 1.0 / c.controller_rate_hz : 0.0;
  double next_sample_t = 0.0;

  SpatialState s = initial;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * c.dt;
    if (sample_period > 0.0 && t >= next_sample_t - 1e-9 * c.dt) {
      ctx.hold_active = false;
      ctx.held = ctx.command_for(t, s);
      ctx.hold_active = true;
      next_sample_t += sample_period;
    }
    const QuadCommand cmd = ctx.command_for(t, s);
    if (n % static_cast<std::size_t>(c.decimate) == 0)
      log.records.push_back(make_record(t, s, cmd, trajectory.at(t, s)));
    if (cmd.any_saturated()) ++log.steps_saturated;

    const SpatialState next = ctx.advance(t, s);
    ++log.steps_executed;
    const double t_next = static_cast<double>(n + 1) * c.dt;
    if (!next.finite()) {
      log.diverged = true;
      log.divergence_reason = "non-finite state";
      log.duration_completed = t;
      return log;
    }
    s = next;
    if (c.pin_pitch) {
      s.pitch = initial.pitch;
      s.roll = initial.roll;
      s.pitch_rate = initial.pitch_rate;
      s.roll_rate = initial.roll_rate;
    }
    if (s.velocity.norm() > c.divergence_speed ||
        std::abs(s.pitch) > c.divergence_pitch ||
        std::abs(s.roll) > c.divergence_pitch) {
      log.records.push_back(make_record(t_next, s, ctx.command_for(t_next, s),
                                        trajectory.at(t_next, s)));
      log.diverged = true;
      log.divergence_reason =
          s.velocity.norm() > c.divergence_speed ? "speed envelope exceeded"
                                                 : "angle envelope exceeded";
      log.duration_completed = t_next;
      return log;
    }
  }

  const double t_end = static_cast<double>(steps) * c.dt;
  log.records.push_back(make_record(t_end, s, ctx.command_for(t_end, s),
                                    trajectory.at(t_end, s)));
  log.duration_completed = t_end;
  return log;
}

}  // namespace sblimp
