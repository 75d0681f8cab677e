#include "sblimp/cli_app.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "sblimp/config.hpp"
#include "sblimp/csvio.hpp"
#include "sblimp/experiments.hpp"
#include "sblimp/simulator.hpp"
#include "sblimp/spatial3d.hpp"
#include "sblimp/verification.hpp"

namespace sblimp {

namespace {

namespace fs = std::filesystem;

constexpr int kExitStable = 0;
constexpr int kExitDiverged = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitVerifyFailure = 4;

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  int decimate = 0;          // 0 = keep config value
  unsigned parallel = 0;     // 0 = keep config value
  std::string integrator;    // empty = keep config value
};

RunConfig load_config(const CommonFlags& flags) {
  RunConfig rc;
  if (!flags.config_path.empty())
    rc = parse_config_file(flags.config_path);
  if (!flags.out_dir.empty()) rc.output_dir = flags.out_dir;
  if (flags.decimate > 0) rc.sim.decimate = flags.decimate;
  if (flags.parallel > 0) rc.sweep_parallel = flags.parallel;
  if (!flags.integrator.empty()) {
    if (flags.integrator == "rk4")
      rc.sim.integrator = Integrator::rk4;
    else if (flags.integrator == "euler")
      rc.sim.integrator = Integrator::euler;
    else
      throw ConfigError("integrator must be rk4 or euler, got '" +
                        flags.integrator + "'");
  }
  return rc;
}

fs::path resolve_out_dir(const RunConfig& rc) {
  if (!rc.output_dir.empty()) return rc.output_dir;
  if (const char* root = std::getenv("SBLIMP_OUT_ROOT");
      root != nullptr && *root != '\0')
    return root;
  return "sblimp_out";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::unique_ptr<Trajectory> make_planar_trajectory(const RunConfig& rc) {
  const Vec2 start{rc.start_x, rc.start_z};
  switch (rc.trajectory) {
    case TrajectoryKind::circle:
      return std::make_unique<Circle>(rc.radius, rc.speed, start);
    case TrajectoryKind::hover:
      return std::make_unique<Hover>(Vec2{rc.target_x, rc.target_z},
                                     rc.position_gain, rc.speed_cap);
    case TrajectoryKind::constant:
      return std::make_unique<ConstantVelocity>(
          Vec2{rc.constant_vx, rc.constant_vz}, start);
    case TrajectoryKind::helix:
      break;
  }
  throw std::logic_error("not a planar trajectory");
}

std::string summary_text(const RunConfig& rc, const Metrics& m,
                         StabilityClass cls, bool diverged_flag,
                         const std::string& reason) {
  std::ostringstream out;
  out << "trajectory: " << to_string(rc.trajectory) << '\n'
      << "stability class: " << to_string(cls) << '\n';
  if (diverged_flag) out << "divergence reason: " << reason << '\n';
  out << "max velocity error (m/s): " << format_sig9(m.max_velocity_error)
      << '\n'
      << "avg velocity error (m/s): " << format_sig9(m.avg_velocity_error)
      << '\n'
      << "max angular error (rad): " << format_sig9(m.max_angular_error)
      << '\n'
      << "avg angular error (rad): " << format_sig9(m.avg_angular_error)
      << '\n'
      << "max position error (m): " << format_sig9(m.max_position_error)
      << '\n'
      << "avg position error (m): " << format_sig9(m.avg_position_error)
      << '\n'
      << "saturation fraction: " << format_sig9(m.saturation_fraction) << '\n'
      << "post-transient samples: " << m.samples << '\n';
  return out.str();
}

int cmd_simulate(const CommonFlags& flags) {
  RunConfig rc;
  try {
    rc = load_config(flags);
    validate(rc.design);
    validate(rc.gains);
    validate(rc.sim);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const fs::path out_dir = resolve_out_dir(rc);
  Metrics m;
  StabilityClass cls;
  bool diverged_flag = false;
  std::string reason;
  try {
    fs::create_directories(out_dir);
    ClassifyThresholds th = rc.classify;
    th.transient_s = rc.transient_s;
    if (rc.trajectory == TrajectoryKind::helix) {
      const Helix helix(rc.radius, rc.speed, rc.ramp, rc.climb_rate,
                        Vec3{rc.start_x, 0.0, rc.start_height});
      SpatialState initial;
      initial.position = {rc.start_x, 0.0, rc.start_height};
      const SpatialLog log =
          spatial_run(rc.design, rc.gains, rc.sim, helix, initial);
      const SimLog view = planar_metric_view(log);
      m = metrics(view, rc.transient_s);
      cls = classify_stability(view, th);
      diverged_flag = log.diverged;
      reason = log.divergence_reason;
      write_spatial_csv(log, out_dir / "log.csv");
    } else {
      const auto traj = make_planar_trajectory(rc);
      const SimLog log = run(rc.design, rc.gains, rc.sim, *traj);
      m = metrics(log, rc.transient_s);
      cls = classify_stability(log, th);
      diverged_flag = log.diverged;
      reason = log.divergence_reason;
      write_planar_csv(log, out_dir / "log.csv");
    }
    write_text(out_dir / "summary.txt",
               summary_text(rc, m, cls, diverged_flag, reason));
    write_text(out_dir / "resolved_config", serialize_config(rc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  std::cout << "class=" << to_string(cls)
            << " max_verr=" << format_sig9(m.max_velocity_error)
            << " avg_verr=" << format_sig9(m.avg_velocity_error)
            << " sat_frac=" << format_sig9(m.saturation_fraction)
            << " artifacts=" << out_dir.string() << '\n';
  if (cls == StabilityClass::diverged) {
    std::cerr << "run diverged"
              << (reason.empty() ? std::string(": lost velocity tracking")
                                 : ": " + reason)
              << '\n';
    return kExitDiverged;
  }
  return kExitStable;
}

int cmd_sweep(const CommonFlags& flags) {
  RunConfig rc;
  SweepSpec spec;
  try {
    rc = load_config(flags);
    spec = make_sweep_spec(rc);
    validate(spec.base);
    validate(spec.gains);
    sweep_grid(spec);  // grid shape errors are config errors
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const fs::path out_dir = resolve_out_dir(rc);
  try {
    fs::create_directories(out_dir);
    const SweepReport report = sweep(spec);
    write_sweep_csv(report, out_dir / "sweep.csv");
    write_sweep_plot_data(report, SweepMetric::avg_velocity_error,
                          out_dir / "avg_verr.dat");
    write_sweep_plot_data(report, SweepMetric::max_velocity_error,
                          out_dir / "max_verr.dat");
    write_sweep_plot_data(report, SweepMetric::avg_angular_error,
                          out_dir / "avg_aerr.dat");
    write_sweep_plot_data(report, SweepMetric::max_angular_error,
                          out_dir / "max_aerr.dat");
    write_sweep_plot_data(report, SweepMetric::saturation_fraction,
                          out_dir / "sat_frac.dat");
    write_sweep_gnuplot(report, out_dir / "sweep.gp");
    write_text(out_dir / "resolved_config", serialize_config(rc));

    std::ostringstream summary;
    summary << "swept parameter: " << to_string(report.param) << '\n'
            << "grid points: " << report.points.size() << '\n';
    if (const auto onset = saturation_onset(report))
      summary << "saturation onset: " << format_sig9(*onset) << '\n';
    if (const auto div = divergence_onset(report))
      summary << "divergence onset: " << format_sig9(*div) << '\n';
    for (const std::string& a : report.anomalies)
      summary << "anomaly: " << a << '\n';
    write_text(out_dir / "summary.txt", summary.str());

    std::cout << "sweep complete: " << report.points.size() << " points, "
              << report.anomalies.size() << " anomalies, artifacts="
              << out_dir.string() << '\n';
    for (const std::string& a : report.anomalies)
      std::cerr << "anomaly: " << a << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitStable;
}

int cmd_verify(const CommonFlags& flags) {
  RunConfig rc;
  try {
    rc = load_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  const auto checks = run_verification(rc.design, rc.gains);
  bool all_pass = true;
  for (const VerificationCheck& c : checks) {
    if (c.pass) {
      std::cout << "PASS " << c.name << '\n';
    } else {
      all_pass = false;
      std::cout << "FAIL " << c.name
                << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
    }
  }
  return all_pass ? kExitStable : kExitVerifyFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"swing-blimp planar simulation and control toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  const auto add_common = [&flags](CLI::App* sub, bool with_parallel,
                                   bool with_decimate) {
    sub->add_option("--config", flags.config_path,
                    "key = value configuration file");
    sub->add_option("--out", flags.out_dir,
                    "output directory (default: config output.dir, then "
                    "$SBLIMP_OUT_ROOT, then ./sblimp_out)");
    sub->add_option("--integrator", flags.integrator,
                    "integration scheme: rk4 or euler");
    if (with_decimate)
      sub->add_option("--decimate", flags.decimate,
                      "record every n-th step in log.csv");
    if (with_parallel)
      sub->add_option("--parallel", flags.parallel,
                      "worker threads for sweep evaluation");
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "run one trajectory and write logs");
  add_common(simulate, false, true);
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep and write the report");
  add_common(sweep_cmd, true, false);
  CLI::App* verify =
      app.add_subcommand("verify", "run the built-in verification suite");
  verify->add_option("--config", flags.config_path,
                     "key = value configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  if (simulate->parsed()) return cmd_simulate(flags);
  if (sweep_cmd->parsed()) return cmd_sweep(flags);
  return cmd_verify(flags);
}

}  // namespace sblimp
