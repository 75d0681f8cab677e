// Acceptance suite: nine end-to-end checks over the library, each printing a
// [PASS]/[FAIL] line with a one-line summary and its wall time. Tolerances
// and budgets are pinned as constants inside each check. The exit code is the
// number of failed checks.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sblimp/controller.hpp"
#include "sblimp/experiments.hpp"
#include "sblimp/model.hpp"
#include "sblimp/params.hpp"
#include "sblimp/simulator.hpp"
#include "sblimp/spatial3d.hpp"
#include "sblimp/trajectories.hpp"

using namespace sblimp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  bool pass = true;
  std::vector<std::string> failures;
  std::ostringstream info;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }

  Outcome finish() const {
    Outcome out;
    out.pass = pass;
    std::string d;
    for (const std::string& f : failures) {
      if (!d.empty()) d += "; ";
      d += f;
    }
    const std::string extra = info.str();
    if (!extra.empty()) d += d.empty() ? extra : " -- " + extra;
    out.detail = d;
    return out;
  }
};

DesignParams random_design(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DesignParams p;
  p.mass = 0.01 + 0.2 * u(rng);
  p.buoyancy = 0.05 + u(rng);
  p.buoyancy_arm = 0.01 + u(rng);
  p.inertia_pitch = 1e-4 + 0.05 * u(rng);
  p.rotor_offset_x = 0.005 + 0.2 * u(rng);
  p.rotor_offset_z = -(0.005 + 0.2 * u(rng));
  const double sign = u(rng) < 0.5 ? -1.0 : 1.0;
  p.tilt = sign * (0.05 + 1.4 * u(rng));
  p.drag_x = 0.001 + 0.3 * u(rng);
  p.drag_z = 0.001 + 0.3 * u(rng);
  p.drag_pitch = 0.001 + 0.3 * u(rng);
  return p;
}

// 1. The torque row of the allocation must equal the coupling coefficient
// times the lateral force row, for any non-degenerate design.
Outcome check_coupling_identity() {
  constexpr double kTol = 1e-12;
  constexpr int kDesigns = 1000;
  Check c;
  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  for (int i = 0; i < kDesigns; ++i) {
    const DesignParams p = random_design(rng);
    const Mat2 af = thrust_force_matrix(p);
    const RowVec2 at = thrust_torque_matrix(p);
    const double k = coupling_coefficient(p);
    const double residual = std::max(std::abs(at(0) - k * af(0, 0)),
                                     std::abs(at(1) - k * af(0, 1)));
    worst = std::max(worst, residual);
  }
  c.require(worst < kTol, "worst residual exceeds tolerance");
  c.info << "worst residual " << worst << " over " << kDesigns
        << " random designs (tol " << kTol << ")";
  return c.finish();
}

// 2. With the attitude pinned, the closed-loop velocity must match the
// per-axis analytic solution, and the long-run gain must equal k/(k+d).
Outcome check_closed_loop_velocity() {
  constexpr double kTrajTol = 1e-6;
  constexpr double kRatioTol = 1e-4;
  Check c;
  const DesignParams p{};
  const ControllerGains g{};
  const Vec2 vd{0.02, 0.01};

  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.duration = 10.0;
  cfg.pin_pitch = true;
  const ConstantVelocity traj(vd, Vec2{0.0, 0.0});
  const SimLog log = run(p, g, cfg, traj);

  c.require(!log.diverged, "run diverged");
  c.require(log.steps_saturated == 0, "setpoint saturated the rotors");
  double worst = 0.0;
  for (const SimRecord& r : log.records) {
    const Vec2 exact = closed_form_velocity(p, g, vd, Vec2{0.0, 0.0}, r.t);
    worst = std::max(worst, (r.state.velocity - exact).cwiseAbs().maxCoeff());
  }
  c.require(worst < kTrajTol, "trajectory deviates from the analytic solution");

  const Vec2 v_end = log.records.back().state.velocity;
  const double rx = v_end.x() / vd.x() - g.k_vx / (g.k_vx + p.drag_x);
  const double rz = v_end.y() / vd.y() - g.k_vz / (g.k_vz + p.drag_z);
  const double ratio_err = std::max(std::abs(rx), std::abs(rz));
  c.require(ratio_err < kRatioTol, "steady-state gain is off");

  c.info << "max deviation " << worst << " (tol " << kTrajTol
        << "), steady-state gain error " << ratio_err << " (tol " << kRatioTol
        << ")";
  return c.finish();
}

// 3. Released from any pitch in (-1.2, 1.2) rad with the rotors off, the
// pendulum must settle upright and its energy must never increase.
Outcome check_pendulum_settling() {
  constexpr double kFinalTol = 1e-3;
  constexpr double kEnergySlack = 1e-9;
  constexpr int kTrials = 50;
  Check c;
  const DesignParams p{};
  const ControllerGains g{};
  std::mt19937_64 rng(20240303);
  std::uniform_real_distribution<double> angle(-1.2, 1.2);

  double worst_final = 0.0;
  double worst_rise = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.duration = 40.0;
    cfg.actuation_enabled = false;
    cfg.initial_state.pitch = angle(rng);
    const ConstantVelocity traj(Vec2{0.0, 0.0}, Vec2{0.0, 0.0});
    const SimLog log = run(p, g, cfg, traj);

    c.require(!log.diverged, "free pendulum run aborted");
    double prev = pendulum_energy(p, log.records.front().state);
    for (std::size_t k = 1; k < log.records.size(); ++k) {
      const double e = pendulum_energy(p, log.records[k].state);
      worst_rise = std::max(worst_rise, e - prev);
      prev = e;
    }
    worst_final = std::max(worst_final,
                           std::abs(log.records.back().state.pitch));
  }
  c.require(worst_rise <= kEnergySlack, "pendulum energy increased");
  c.require(worst_final < kFinalTol, "pendulum failed to settle upright");

  c.info << kTrials << " releases: worst final |pitch| " << worst_final
        << " (tol " << kFinalTol << "), worst per-step energy rise "
        << worst_rise << " (slack " << kEnergySlack << ")";
  return c.finish();
}

// 4. For small initial pitch, the linear second-order pitch model must stay
// within 5% (of the motion's own scale) of the full nonlinear closed loop.
Outcome check_linearized_pitch() {
  constexpr double kRelTol = 0.05;
  Check c;
  const DesignParams p{};
  const ControllerGains g{};
  const double dt = 1e-3;
  const double duration = 5.0;

  double worst_rel = 0.0;
  for (const double pitch0 : {-0.05, -0.03, -0.01, 0.01, 0.03, 0.05}) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.duration = duration;
    cfg.initial_state.pitch = pitch0;
    const ConstantVelocity traj(Vec2{0.0, 0.0}, Vec2{0.0, 0.0});
    const SimLog log = run(p, g, cfg, traj);
    c.require(!log.diverged, "full run aborted");

    const auto lin = linearized_pitch_response(
        p, g, [](double) { return Vec2{0.0, 0.0}; }, pitch0, 0.0, dt,
        duration);
    c.require(lin.size() == log.records.size(), "sample counts differ");
    const std::size_t n = std::min(lin.size(), log.records.size());
    double dev = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      dev = std::max(dev, std::abs(lin[k].pitch - log.records[k].state.pitch));
      scale = std::max(scale, std::abs(log.records[k].state.pitch));
    }
    if (scale > 0.0) worst_rel = std::max(worst_rel, dev / scale);
  }
  c.require(worst_rel < kRelTol, "linear model deviates beyond 5%");

  c.info << "worst relative deviation " << worst_rel << " (tol " << kRelTol
        << ") for |pitch0| <= 0.05 over " << duration << " s";
  return c.finish();
}

// 5. A 0.1 m/s circle must be tracked with post-transient velocity error
// under 1 cm/s for 100 s.
Outcome check_slow_circle() {
  constexpr double kTol = 0.01;
  Check c;
  const DesignParams p{};
  const ControllerGains g{};
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.duration = 100.0;
  const Circle traj(1.0, 0.1, Vec2{0.0, 0.0});
  const SimLog log = run(p, g, cfg, traj);
  c.require(!log.diverged, "run diverged");
  const Metrics m = metrics(log, 10.0);
  c.require(m.max_velocity_error < kTol, "velocity error exceeds 1 cm/s");

  c.info << "max post-transient velocity error " << m.max_velocity_error
        << " m/s (tol " << kTol << "), saturation fraction "
        << m.saturation_fraction;
  return c.finish();
}

// Shared with check 9: the speed at which circle tracking first collapses.
std::optional<double> g_divergence_onset;

// 6. Sweeping the circle speed must show a linear pre-saturation error
// regime, then a saturation onset, then divergence, in that order; and the
// drag calibration must place the onset at 0.60 +/- 0.05 m/s.
Outcome check_speed_sweep() {
  constexpr double kR2Min = 0.95;
  constexpr double kTargetOnset = 0.6;
  constexpr double kOnsetTol = 0.05;
  Check c;
  SweepSpec spec;
  spec.param = SweepParam::speed;
  spec.min = 0.01;
  spec.max = 2.0;
  spec.step = 0.01;
  spec.duration = 100.0;
  spec.dt = 1e-3;
  const SweepReport report = sweep(spec);

  std::vector<double> xs;
  std::vector<double> ys;
  for (const SweepPoint& pt : report.points) {
    if (!pt.valid_config) continue;
    if (pt.m.saturation_fraction > 0.0) break;  // linear regime ends here
    xs.push_back(pt.value);
    ys.push_back(pt.m.avg_velocity_error);
  }
  c.require(xs.size() >= 3, "too few pre-saturation points");
  const LinearFit fit = linear_fit(xs, ys);
  c.require(fit.r_squared > kR2Min, "pre-saturation regime is not linear");

  const auto sat = saturation_onset(report);
  const auto div = divergence_onset(report);
  g_divergence_onset = div;
  c.require(sat.has_value(), "no saturation onset in the sweep");
  c.require(div.has_value(), "no divergence onset in the sweep");
  if (sat && div) c.require(*sat < *div, "saturation does not precede divergence");

  const CalibrationResult cal = calibrate_drag_for_onset(
      DesignParams{}, ControllerGains{}, kTargetOnset, kOnsetTol);
  c.require(std::abs(cal.onset_speed - kTargetOnset) <= kOnsetTol,
            "drag calibration cannot reach the requested onset");

  c.info << "linear fit R^2 " << fit.r_squared << " over " << xs.size()
        << " points, saturation onset "
        << (sat ? std::to_string(*sat) : std::string("none"))
        << ", divergence onset "
        << (div ? std::to_string(*div) : std::string("none"))
        << "; calibration: drag_x " << cal.drag_x << " -> onset "
        << cal.onset_speed << " after " << cal.evaluations
        << " evaluations (target " << kTargetOnset << " +/- " << kOnsetTol
        << "; the achievable onset is capped near 0.44 m/s by the circle's "
           "vertical load, so the target is out of reach at these defaults)";
  return c.finish();
}

// 7. Growing the buoyancy arm must strictly reduce the worst pitch
// excursion, with diminishing returns: the tail from 0.3 m on contributes
// less than 10% of the total improvement.
Outcome check_arm_sweep() {
  constexpr double kTailShareMax = 0.10;
  Check c;
  SweepSpec spec;
  spec.param = SweepParam::buoyancy_arm;
  spec.min = 0.01;
  spec.max = 1.0;
  spec.step = 0.01;
  spec.duration = 100.0;
  spec.dt = 1e-3;
  const SweepReport report = sweep(spec);

  bool all_valid = true;
  bool any_diverged = false;
  bool strictly_decreasing = true;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const SweepPoint& pt = report.points[i];
    all_valid = all_valid && pt.valid_config;
    any_diverged = any_diverged || pt.cls == StabilityClass::diverged;
    if (i > 0 && pt.m.max_angular_error >=
                     report.points[i - 1].m.max_angular_error)
      strictly_decreasing = false;
  }
  c.require(all_valid, "grid contains invalid designs");
  c.require(!any_diverged, "a grid point diverged");
  c.require(strictly_decreasing, "pitch excursion is not strictly decreasing");

  const auto value_at = [&](double v) -> const SweepPoint* {
    for (const SweepPoint& pt : report.points)
      if (std::abs(pt.value - v) < 1e-9) return &pt;
    return nullptr;
  };
  const SweepPoint* lo = value_at(0.01);
  const SweepPoint* mid = value_at(0.3);
  const SweepPoint* hi = value_at(1.0);
  c.require(lo && mid && hi, "expected grid values missing");
  double tail_share = 1.0;
  if (lo && mid && hi) {
    const double total = lo->m.max_angular_error - hi->m.max_angular_error;
    const double tail = mid->m.max_angular_error - hi->m.max_angular_error;
    c.require(total > 0.0, "no net improvement across the sweep");
    if (total > 0.0) tail_share = tail / total;
    c.require(tail_share < kTailShareMax,
              "improvement does not level off past 0.3 m");
    c.info << "max pitch excursion " << lo->m.max_angular_error << " rad at "
          << "0.01 m down to " << hi->m.max_angular_error << " rad at 1.0 m; "
          << "share of the improvement left after 0.3 m: " << tail_share
          << " (max " << kTailShareMax << ")";
  }
  return c.finish();
}

// 8. Sweeping the mass, the first run that diverges because the vehicle is
// too heavy must sit exactly at the first grid value whose weight exceeds
// buoyancy plus the maximum static rotor lift; lighter diverged runs must
// all be positively buoyant (the rotors cannot push down).
Outcome check_mass_sweep() {
  Check c;
  SweepSpec spec;
  spec.param = SweepParam::mass;
  spec.min = 0.05;
  spec.max = 0.1;
  spec.step = 0.001;
  spec.duration = 100.0;
  spec.dt = 1e-3;
  const SweepReport report = sweep(spec);

  const DesignParams base{};
  const double m_crit = critical_mass(base);
  const double m_float = base.buoyancy / base.gravity;

  std::optional<double> first_heavy_diverged;
  bool heavy_all_diverged = true;
  bool feasible_none_diverged = true;
  bool light_diverged_all_float = true;
  for (const SweepPoint& pt : report.points) {
    if (!pt.valid_config) {
      c.require(false, "grid contains an invalid design");
      continue;
    }
    const bool diverged = pt.cls == StabilityClass::diverged;
    if (pt.value > m_crit) {
      if (diverged && !first_heavy_diverged) first_heavy_diverged = pt.value;
      heavy_all_diverged = heavy_all_diverged && diverged;
    } else if (pt.value >= m_float) {
      feasible_none_diverged = feasible_none_diverged && !diverged;
    } else if (diverged && pt.value * base.gravity >= base.buoyancy) {
      light_diverged_all_float = false;
    }
  }
  c.require(heavy_all_diverged, "an infeasibly heavy run did not diverge");
  c.require(feasible_none_diverged, "a statically feasible run diverged");
  c.require(light_diverged_all_float,
            "a non-buoyant lighter run diverged");
  c.require(first_heavy_diverged.has_value(), "no heavy run diverged");

  // The flip must land on the first grid value past the static-lift limit.
  double expected = spec.min;
  while (expected <= m_crit + 1e-12) expected += spec.step;
  if (first_heavy_diverged)
    c.require(std::abs(*first_heavy_diverged - expected) < 1e-9,
              "divergence boundary is off the static-lift limit");

  c.info << "static-lift mass limit " << m_crit << " kg, first heavy diverged "
        << "grid value "
        << (first_heavy_diverged ? std::to_string(*first_heavy_diverged)
                                 : std::string("none"))
        << " (expected " << expected << ")";
  return c.finish();
}

double planar_gap(const SimLog& planar, const SpatialLog& spatial) {
  const std::size_t n =
      std::min(planar.records.size(), spatial.records.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SimRecord& a = planar.records[i];
    const SpatialRecord& b = spatial.records[i];
    gap = std::max(gap, std::abs(a.state.position.x() - b.state.position.x()));
    gap = std::max(gap, std::abs(a.state.position.y() - b.state.position.z()));
    gap = std::max(gap, std::abs(a.state.velocity.x() - b.state.velocity.x()));
    gap = std::max(gap, std::abs(a.state.velocity.y() - b.state.velocity.z()));
    gap = std::max(gap, std::abs(a.state.pitch - b.state.pitch));
    gap = std::max(gap, std::abs(a.state.pitch_rate - b.state.pitch_rate));
    gap = std::max(gap, std::abs(b.state.position.y()));
    gap = std::max(gap, std::abs(b.state.velocity.y()));
    gap = std::max(gap, std::abs(b.state.roll));
    gap = std::max(gap, std::abs(b.state.roll_rate));
  }
  return gap;
}

// 9. Confined to the xz plane, the four-rotor spatial model must reproduce
// the planar model to 1e-9; a slow helix must then keep tracking until its
// planar speed passes the divergence speed found in check 6.
Outcome check_spatial_reduction() {
  constexpr double kGapTol = 1e-9;
  Check c;
  const DesignParams p{};
  const ControllerGains g{};

  {
    // Straight climb, attitude free: no lateral error ever arises, so the
    // plane-confined runs must agree to roundoff accumulation.
    const auto climb =
        std::make_shared<ConstantVelocity>(Vec2{0.0, 0.02}, Vec2{0.0, 0.0});
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.duration = 50.0;
    const SimLog planar = run(p, g, cfg, *climb);
    const PlanarInXZ confined(climb);
    const SpatialLog spatial = spatial_run(p, g, cfg, confined, SpatialState{});
    c.require(!planar.diverged && !spatial.diverged, "climb run aborted");
    const double gap = planar_gap(planar, spatial);
    c.require(gap < kGapTol, "climb gap exceeds 1e-9");
    c.info << "climb gap " << gap;
  }
  {
    // Circle with the attitude pinned: the two planes decouple exactly.
    const auto circle = std::make_shared<Circle>(1.0, 0.1, Vec2{0.0, 0.0});
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.duration = 50.0;
    cfg.pin_pitch = true;
    const SimLog planar = run(p, g, cfg, *circle);
    const PlanarInXZ confined(circle);
    const SpatialLog spatial = spatial_run(p, g, cfg, confined, SpatialState{});
    c.require(!planar.diverged && !spatial.diverged, "circle run aborted");
    const double gap = planar_gap(planar, spatial);
    c.require(gap < kGapTol, "pinned circle gap exceeds 1e-9");
    c.info << ", pinned-circle gap " << gap;
  }

  c.require(g_divergence_onset.has_value(),
            "no divergence speed available from the speed sweep");
  if (g_divergence_onset) {
    const double v_div = *g_divergence_onset;
    const double v0 = 0.06;
    const double ramp = 0.000537;
    const double climb_rate = 0.002;
    const double t_star = (v_div - v0) / ramp;
    const double t_end = t_star + 150.0;

    const Helix helix(1.0, v0, ramp, climb_rate, Vec3{0.0, 0.0, 0.35});
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.duration = t_end;
    cfg.decimate = 100;
    // Physically meaningful envelope: a sound run never approaches 2 m/s nor
    // swings the pendulum past horizontal, so an abort is a real blowup.
    cfg.divergence_speed = 2.0;
    cfg.divergence_pitch = 1.57;
    SpatialState initial;
    initial.position = Vec3{0.0, 0.0, 0.35};
    const SpatialLog log = spatial_run(p, g, cfg, helix, initial);

    // Divergence, if it happens at all, must only happen beyond the speed
    // where the planar circle already collapses.
    c.require(!log.diverged || log.duration_completed >= t_star,
              "helix diverged below the planar divergence speed");

    double worst_angle = 0.0;
    double worst_slow_err = 0.0;
    for (const SpatialRecord& r : log.records) {
      if (r.t > t_star) break;
      worst_angle = std::max(worst_angle, std::max(std::abs(r.state.pitch),
                                                   std::abs(r.state.roll)));
      if (r.t >= 10.0 && helix.planar_speed(r.t) <= 0.1)
        worst_slow_err = std::max(worst_slow_err, r.velocity_error.norm());
    }
    c.require(worst_slow_err < 0.02,
              "helix tracking poor in the slow unsaturated regime");
    c.info << "; helix ramp reaches " << v_div << " m/s at t " << t_star
           << " s: "
           << (log.diverged
                   ? "diverged at t " +
                         std::to_string(log.duration_completed) + " (" +
                         log.divergence_reason + ")"
                   : "no divergence over " + std::to_string(t_end) + " s")
           << ", worst attitude below the limit " << worst_angle
           << " rad, slow-regime velocity error " << worst_slow_err << " m/s";
  }
  return c.finish();
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"allocation coupling identity on random designs", 1.0,
       check_coupling_identity},
      {"pinned-attitude closed-loop velocity matches the analytic law", 5.0,
       check_closed_loop_velocity},
      {"pendulum release settles upright with monotone energy", 30.0,
       check_pendulum_settling},
      {"linearized pitch response tracks the nonlinear loop within 5%", 5.0,
       check_linearized_pitch},
      {"slow circle is tracked within 1 cm/s", 30.0, check_slow_circle},
      {"speed sweep: linear regime, onsets in order, drag calibration", 600.0,
       check_speed_sweep},
      {"buoyancy-arm sweep: restoring improvement levels off", 300.0,
       check_arm_sweep},
      {"mass sweep: divergence flips at the static-lift limit", 300.0,
       check_mass_sweep},
      {"plane-confined spatial runs reproduce the planar model", 120.0,
       check_spatial_reduction},
  };

  int failed = 0;
  int index = 0;
  for (const Criterion& cr : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = cr.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > cr.budget_s) {
      out.pass = false;
      out.detail += " [over budget: " + std::to_string(elapsed) + " s > " +
                    std::to_string(cr.budget_s) + " s]";
    }
    if (!out.pass) ++failed;
    std::printf("[%s] %d/9 %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", index,
                cr.name, elapsed);
    if (!out.detail.empty()) std::printf("       %s\n", out.detail.c_str());
  }
  std::printf("%d/9 criteria passed\n",
              static_cast<int>(criteria.size()) - failed);
  return failed;
}
