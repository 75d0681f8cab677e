#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "sblimp/experiments.hpp"
#include "sblimp/params.hpp"
#include "sblimp/simulator.hpp"

namespace sblimp {

// Configuration file fault: syntax, unknown key, duplicate key, or a value
// that does not parse. Carries line/key context in the message.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class TrajectoryKind { hover, circle, helix, constant };

std::string to_string(TrajectoryKind k);

// Full run description: vehicle design, gains, integration settings,
// trajectory selection, sweep grid, classification thresholds, output.
// Every field has a documented default; the flat `key = value` schema covers
// every field, so a serialized config reproduces the run bit-for-bit.
struct RunConfig {
  DesignParams design{};
  ControllerGains gains{};
  SimConfig sim{};

  TrajectoryKind trajectory = TrajectoryKind::circle;
  double radius = 1.0;
  double speed = 0.1;
  double ramp = 0.000537;       // helix planar acceleration, m/s^2
  double climb_rate = 0.002;    // helix vertical speed, m/s
  double start_x = 0.0;         // planar trajectory start
  double start_z = 0.0;
  double start_height = 0.35;   // helix initial height
  double target_x = 0.0;        // hover target
  double target_z = 0.0;
  double constant_vx = 0.1;     // constant-velocity setpoint
  double constant_vz = 0.0;
  double position_gain = 0.5;   // hover outer loop, 1/s
  double speed_cap = 0.3;       // hover commanded-speed cap, m/s

  SweepParam sweep_param = SweepParam::speed;
  double sweep_min = 0.01;
  double sweep_max = 2.0;
  double sweep_step = 0.01;
  unsigned sweep_parallel = 1;
  double sweep_circle_speed = 0.1;
  double sweep_duration = 100.0;

  ClassifyThresholds classify{};
  double transient_s = 10.0;
  std::string output_dir;
};

// Parses the `key = value` format: one pair per line, '#' comments, blank
// lines ignored. Unknown and duplicate keys are rejected; missing keys keep
// their defaults. Throws ConfigError with line context.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

// Canonical serialization with every key explicit and doubles at full
// precision, so parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& c);

// Builds the sweep description embedded in a config.
SweepSpec make_sweep_spec(const RunConfig& c);

}  // namespace sblimp
