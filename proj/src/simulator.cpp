#include "sblimp/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "sblimp/integrate.hpp"

namespace sblimp {

void validate(const SimConfig& c) {
  if (!(c.dt > 0.0) || !std::isfinite(c.dt))
    throw std::invalid_argument("dt must be > 0");
  if (!(c.duration >= c.dt) || !std::isfinite(c.duration))
    throw std::invalid_argument("duration must be >= dt");
  if (c.controller_rate_hz < 0.0 || !std::isfinite(c.controller_rate_hz))
    throw std::invalid_argument("controller_rate_hz must be >= 0");
  if (c.controller_rate_hz > 0.0 && c.controller_rate_hz > 1.0 / c.dt + 1e-9)
    throw std::invalid_argument("controller_rate_hz must not exceed 1/dt");
  if (c.decimate < 1) throw std::invalid_argument("decimate must be >= 1");
  if (!(c.divergence_speed > 0.0) || !(c.divergence_pitch > 0.0))
    throw std::invalid_argument("divergence thresholds must be > 0");
  if (!c.initial_state.finite())
    throw std::invalid_argument("initial state must be finite");
}

namespace {

struct LoopContext {
  const DesignParams& params;
  const ControllerGains& gains;
  const SimConfig& cfg;
  const Trajectory& traj;
  bool hold_active = false;
  RotorCommand held{};

  RotorCommand command_for(double t, const PlanarState& s) const {
    if (!cfg.actuation_enabled) return RotorCommand{};
    if (hold_active) return held;
    const TrajectorySample ref = traj.at(t, s);
    return velocity_command(params, gains, s.pitch, ref.velocity, s.velocity);
  }

  Vec6 derivative(double t, const Vec6& y) const {
    PlanarState s = PlanarState::from_vector(y);
    PlanarState d = state_derivative(params, s, command_for(t, s));
    if (cfg.pin_pitch) {
      d.pitch = 0.0;
      d.pitch_rate = 0.0;
    }
    return d.to_vector();
  }

  PlanarState advance(double t, const PlanarState& s) const {
    const auto f = [this](double tt, const Vec6& y) { return derivative(tt, y); };
    const Vec6 y = s.to_vector();
    const Vec6 next = cfg.integrator == Integrator::rk4
                          ? detail::rk4_step(y, t, cfg.dt, f)
                          : detail::euler_step(y, t, cfg.dt, f);
    return PlanarState::from_vector(next);
  }
};

SimRecord make_record(double t, const PlanarState& s, const RotorCommand& cmd,
                      const TrajectorySample& ref) {
  SimRecord r;
  r.t = t;
  r.state = s;
  r.command = cmd;
  r.velocity_ref = ref.velocity;
  r.position_ref = ref.position;
  r.velocity_error = ref.velocity - s.velocity;
  r.position_error = ref.position - s.position;
  r.angular_error = s.pitch;
  return r;
}

}  // namespace

PlanarState step(const DesignParams& p, const ControllerGains& g,
                 const SimConfig& c, const PlanarState& s,
                 const Vec2& v_desired) {
  validate(p);
  validate(g);
  validate(c);
  ConstantVelocity traj(v_desired, s.position);
  LoopContext ctx{p, g, c, traj};
  if (c.controller_rate_hz > 0.0) {
    ctx.held = ctx.command_for(0.0, s);
    ctx.hold_active = true;
  }
  return ctx.advance(0.0, s);
}

SimLog run(const DesignParams& p, const ControllerGains& g, const SimConfig& c,
           const Trajectory& trajectory) {
  validate(p);
  validate(g);
  validate(c);

  const auto steps = static_cast<std::size_t>(std::llround(c.duration / c.dt));
  if (steps == 0) throw std::invalid_argument("duration must cover one step");

  SimLog log;
  log.dt = c.dt;
  log.decimate = c.decimate;
  log.records.reserve(steps / static_cast<std::size_t>(c.decimate) + 2);

  LoopContext ctx{p, g, c, trajectory};
  const double sample_period =
      c.controller_rate_hz > 0.0 ? 1.0 / c.controller_rate_hz : 0.0;
  double next_sample_t = 0.0;

  PlanarState s = c.initial_state;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * c.dt;
    if (sample_period > 0.0 && t >= next_sample_t - 1e-9 * c.dt) {
      ctx.hold_active = false;
      ctx.held = ctx.command_for(t, s);
      ctx.hold_active = true;
      next_sample_t += sample_period;
    }
    const RotorCommand cmd = ctx.command_for(t, s);
    if (n % static_cast<std::size_t>(c.decimate) == 0)
      log.records.push_back(make_record(t, s, cmd, trajectory.at(t, s)));
    if (cmd.any_saturated()) ++log.steps_saturated;

    const PlanarState next = ctx.advance(t, s);
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
      s.pitch = c.initial_state.pitch;
      s.pitch_rate = c.initial_state.pitch_rate;
    }
    if (s.velocity.norm() > c.divergence_speed ||
        std::abs(s.pitch) > c.divergence_pitch) {
      log.records.push_back(
          make_record(t_next, s, ctx.command_for(t_next, s),
                      trajectory.at(t_next, s)));
      log.diverged = true;
      log.divergence_reason = s.velocity.norm() > c.divergence_speed
                                  ? "speed envelope exceeded"
                                  : "pitch envelope exceeded";
      log.duration_completed = t_next;
      return log;
    }
  }

  const double t_end = static_cast<double>(steps) * c.dt;
  log.records.push_back(
      make_record(t_end, s, ctx.command_for(t_end, s), trajectory.at(t_end, s)));
  log.duration_completed = t_end;
  return log;
}

}  // namespace sblimp
