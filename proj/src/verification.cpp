#include "sblimp/verification.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "sblimp/controller.hpp"
#include "sblimp/model.hpp"
#include "sblimp/simulator.hpp"
#include "sblimp/trajectories.hpp"

namespace sblimp {

namespace {

DesignParams random_design(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  DesignParams p;
  p.mass = 0.01 + 0.2 * u01(rng);
  p.buoyancy = 0.05 + 1.0 * u01(rng);
  p.buoyancy_arm = 0.01 + 1.0 * u01(rng);
  p.inertia_pitch = 1e-4 + 0.05 * u01(rng);
  p.rotor_offset_x = 0.005 + 0.2 * u01(rng);
  p.rotor_offset_z = -(0.005 + 0.2 * u01(rng));
  // Tilt away from both singular extremes, either sign.
  const double mag = 0.05 + 1.4 * u01(rng);
  p.tilt = u01(rng) < 0.5 ? -mag : mag;
  p.drag_x = 0.001 + 0.3 * u01(rng);
  p.drag_z = 0.001 + 0.3 * u01(rng);
  p.drag_pitch = 1e-4 + 0.05 * u01(rng);
  return p;
}

double coupling_residual(const DesignParams& p) {
  const RowVec2 torque = thrust_torque_matrix(p);
  const RowVec2 slaved = coupling_coefficient(p) *
                         thrust_force_matrix(p).row(0);
  return (torque - slaved).cwiseAbs().maxCoeff();
}

using CheckFn = void (*)(const DesignParams&, const ControllerGains&,
                         std::ostringstream&);

void check_coupling(const DesignParams& design, const ControllerGains&,
                    std::ostringstream& why) {
  double worst = coupling_residual(design);
  std::mt19937_64 rng(20240811);
  for (int i = 0; i < 1000; ++i)
    worst = std::max(worst, coupling_residual(random_design(rng)));
  if (worst > 1e-12) {
    why << "coupling identity residual " << worst << " exceeds 1e-12";
  }
}

void check_roundtrip(const DesignParams& design, const ControllerGains&,
                     std::ostringstream& why) {
  std::mt19937_64 rng(20240812);
  std::uniform_real_distribution<double> angle(-1.5, 1.5);
  std::uniform_real_distribution<double> accel(-5.0, 5.0);
  const Vec2 lift_comp{0.0,
                       design.gravity - design.buoyancy / design.mass};
  for (int i = 0; i < 200; ++i) {
    const double pitch = angle(rng);
    const Vec2 w{accel(rng), accel(rng)};
    const Vec2 u = feedback_linearize(design, pitch, w);
    const Vec2 recovered =
        rotation(pitch) * (thrust_force_matrix(design) * u) / design.mass -
        lift_comp;
    const double err = (recovered - w).cwiseAbs().maxCoeff();
    if (err > 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
      why << "round-trip error " << err << " at pitch " << pitch;
      return;
    }
  }
}

void check_clamp(const DesignParams& design, const ControllerGains&,
                 std::ostringstream& why) {
  std::mt19937_64 rng(20240813);
  std::uniform_real_distribution<double> thrust(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const Vec2 raw{thrust(rng), thrust(rng)};
    const RotorCommand once = clamp(design, raw);
    const RotorCommand twice = clamp(design, once.thrust);
    if ((once.thrust - twice.thrust).cwiseAbs().maxCoeff() != 0.0 ||
        twice.any_saturated()) {
      why << "clamp not idempotent on [" << raw.x() << ", " << raw.y() << "]";
      return;
    }
  }
}

void check_closed_loop(const DesignParams& design, const ControllerGains& gains,
                       std::ostringstream& why) {
  // Setpoint sized well inside the actuation envelope at level pitch.
  const Vec2 v_d{0.02, 0.01};
  SimConfig cfg;
  cfg.duration = 2.0;
  cfg.pin_pitch = true;
  const ConstantVelocity traj(v_d, {0.0, 0.0});
  const SimLog log = run(design, gains, cfg, traj);
  if (log.steps_saturated > 0) {
    why << "verification setpoint saturates this design ("
        << log.steps_saturated << " steps)";
    return;
  }
  double worst = 0.0;
  for (const SimRecord& r : log.records) {
    const Vec2 expect =
        closed_form_velocity(design, gains, v_d, Vec2{0.0, 0.0}, r.t);
    worst = std::max(worst,
                     (r.state.velocity - expect).cwiseAbs().maxCoeff());
  }
  if (worst > 1e-6)
    why << "closed-loop velocity deviates from the analytic solution by "
        << worst;
}

void check_pendulum(const DesignParams& design, const ControllerGains& gains,
                    std::ostringstream& why) {
  SimConfig cfg;
  cfg.duration = 30.0;
  cfg.actuation_enabled = false;
  cfg.initial_state.pitch = 0.5;
  const ConstantVelocity traj(Vec2{0.0, 0.0}, {0.0, 0.0});
  const SimLog log = run(design, gains, cfg, traj);
  double prev = pendulum_energy(design, log.records.front().state);
  for (std::size_t i = 1; i < log.records.size(); ++i) {
    const double e = pendulum_energy(design, log.records[i].state);
    if (e > prev + 1e-9) {
      why << "pendulum energy increased by " << e - prev << " at t="
          << log.records[i].t;
      return;
    }
    prev = e;
  }
  const double final_pitch = std::abs(log.records.back().state.pitch);
  if (final_pitch > 0.01)
    why << "pitch only decayed to " << final_pitch << " rad after 30 s";
}

void check_trajectory(const DesignParams&, const ControllerGains&,
                      std::ostringstream& why) {
  const Circle circle(1.0, 0.1, {0.0, 0.0});
  const PlanarState dummy{};
  const double dt = 1e-3;
  Vec2 integrated = circle.at(0.0, dummy).position;
  for (int n = 0; n < 10000; ++n) {
    const double t = n * dt;
    // RK4 quadrature of the velocity reference.
    const Vec2 k1 = circle.at(t, dummy).velocity;
    const Vec2 k2 = circle.at(t + 0.5 * dt, dummy).velocity;
    const Vec2 k4 = circle.at(t + dt, dummy).velocity;
    integrated += dt / 6.0 * (k1 + 4.0 * k2 + k4);
    const double speed_err =
        std::abs(circle.at(t, dummy).velocity.norm() - 0.1);
    if (speed_err > 1e-12) {
      why << "speed profile off by " << speed_err;
      return;
    }
  }
  const Vec2 expect = circle.at(10.0, dummy).position;
  const double drift = (integrated - expect).norm();
  if (drift > 1e-6)
    why << "integrated velocity drifts " << drift
        << " m from the reference position over 10 s";
}

}  // namespace

std::vector<VerificationCheck> run_verification(const DesignParams& design,
                                                const ControllerGains& gains) {
  std::vector<VerificationCheck> out;

  bool params_ok = true;
  {
    VerificationCheck check{"design-parameters-valid", true, ""};
    try {
      validate(design);
      validate(gains);
    } catch (const std::exception& e) {
      check.pass = false;
      check.detail = e.what();
      params_ok = false;
    }
    out.push_back(std::move(check));
  }

  const std::pair<const char*, CheckFn> checks[] = {
      {"allocation-coupling-identity", &check_coupling},
      {"feedback-linearization-roundtrip", &check_roundtrip},
      {"clamp-idempotent", &check_clamp},
      {"closed-loop-velocity-analytic", &check_closed_loop},
      {"pendulum-decay-monotone-energy", &check_pendulum},
      {"trajectory-consistency", &check_trajectory},
  };
  for (const auto& [name, fn] : checks) {
    VerificationCheck check{name, false, ""};
    if (!params_ok) {
      check.detail = "not evaluated: invalid parameters";
    } else {
      try {
        std::ostringstream why;
        fn(design, gains, why);
        check.detail = why.str();
        check.pass = check.detail.empty();
      } catch (const std::exception& e) {
        check.detail = e.what();
      }
    }
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace sblimp
