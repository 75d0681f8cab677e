#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sblimp/controller.hpp"
#include "sblimp/model.hpp"
#include "sblimp/trajectories.hpp"

namespace sblimp {

enum class Integrator { rk4, euler };

// Fixed-step closed-loop simulation settings.
//
// controller_rate_hz = 0 runs the continuous-control idealization: the
// command is re-evaluated at every integrator stage. A positive rate holds
// the command between samples (zero-order hold); it must not exceed 1/dt.
//
// pin_pitch freezes pitch and pitch rate at their initial values, isolating
// the translational closed loop for comparison against the analytic solution.
struct SimConfig {
  double dt = 1e-3;
  double duration = 100.0;
  Integrator integrator = Integrator::rk4;
  double controller_rate_hz = 0.0;
  PlanarState initial_state{};
  std::uint64_t seed = 0;
  bool pin_pitch = false;
  bool actuation_enabled = true;
  double divergence_speed = 100.0;  // m/s, |v| beyond this aborts the run
  double divergence_pitch = 10.0;   // rad, unwrapped |pitch| beyond this aborts
  int decimate = 1;                 // record every n-th step
};

// Throws std::invalid_argument on violated settings.
void validate(const SimConfig& c);

struct SimRecord {
  double t = 0.0;
  PlanarState state{};
  RotorCommand command{};
  Vec2 velocity_ref{0.0, 0.0};
  Vec2 position_ref{0.0, 0.0};
  Vec2 velocity_error{0.0, 0.0};   // velocity_ref - velocity
  Vec2 position_error{0.0, 0.0};   // position_ref - position
  double angular_error = 0.0;      // pitch relative to the upright equilibrium
};

struct SimLog {
  std::vector<SimRecord> records;
  bool diverged = false;
  std::string divergence_reason;
  double dt = 0.0;
  int decimate = 1;
  std::size_t steps_executed = 0;
  std::size_t steps_saturated = 0;
  double duration_completed = 0.0;
};

// Advances one state by one step under a fixed velocity setpoint.
// Deterministic; never records.
PlanarState step(const DesignParams& p, const ControllerGains& g,
                 const SimConfig& c, const PlanarState& s,
                 const Vec2& v_desired);

// Runs the closed loop over [0, duration], logging every decimate-th step
// plus the final state. Terminates early with the diverged flag set when the
// state leaves the configured speed/pitch envelope or turns non-finite; the
// partial log never contains non-finite values.
SimLog run(const DesignParams& p, const ControllerGains& g, const SimConfig& c,
           const Trajectory& trajectory);

}  // namespace sblimp
