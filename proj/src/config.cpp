#include "sblimp/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace sblimp {

namespace {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty())
    throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("not a boolean (true/false): '" + s + "'");
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

using FieldTable = std::vector<std::pair<std::string, Field>>;

Field real(double RunConfig::* member) {
  return {[member](const RunConfig& c) { return format_full(c.*member); },
          [member](RunConfig& c, const std::string& v) {
            c.*member = parse_double(v);
          }};
}

template <typename Sub>
Field real(Sub RunConfig::* sub, double Sub::* member) {
  return {[=](const RunConfig& c) { return format_full(c.*sub.*member); },
          [=](RunConfig& c, const std::string& v) {
            c.*sub.*member = parse_double(v);
          }};
}

const FieldTable& fields() {
  static const FieldTable table = [] {
    FieldTable t;
    const auto add = [&t](const char* key, Field f) {
      t.emplace_back(key, std::move(f));
    };

    add("design.mass", real(&RunConfig::design, &DesignParams::mass));
    add("design.gravity", real(&RunConfig::design, &DesignParams::gravity));
    add("design.buoyancy", real(&RunConfig::design, &DesignParams::buoyancy));
    add("design.buoyancy_arm",
        real(&RunConfig::design, &DesignParams::buoyancy_arm));
    add("design.inertia_pitch",
        real(&RunConfig::design, &DesignParams::inertia_pitch));
    add("design.rotor_offset_x",
        real(&RunConfig::design, &DesignParams::rotor_offset_x));
    add("design.rotor_offset_z",
        real(&RunConfig::design, &DesignParams::rotor_offset_z));
    add("design.tilt", real(&RunConfig::design, &DesignParams::tilt));
    add("design.drag_x", real(&RunConfig::design, &DesignParams::drag_x));
    add("design.drag_z", real(&RunConfig::design, &DesignParams::drag_z));
    add("design.drag_pitch",
        real(&RunConfig::design, &DesignParams::drag_pitch));
    add("design.thrust_min",
        {[](const RunConfig& c) {
           return format_full(c.design.limits.thrust_min);
         },
         [](RunConfig& c, const std::string& v) {
           c.design.limits.thrust_min = parse_double(v);
         }});
    add("design.thrust_max",
        {[](const RunConfig& c) {
           return format_full(c.design.limits.thrust_max);
         },
         [](RunConfig& c, const std::string& v) {
           c.design.limits.thrust_max = parse_double(v);
         }});

    add("gains.k_vx", real(&RunConfig::gains, &ControllerGains::k_vx));
    add("gains.k_vz", real(&RunConfig::gains, &ControllerGains::k_vz));

    add("sim.dt", real(&RunConfig::sim, &SimConfig::dt));
    add("sim.duration", real(&RunConfig::sim, &SimConfig::duration));
    add("sim.integrator",
        {[](const RunConfig& c) {
           return std::string(c.sim.integrator == Integrator::rk4 ? "rk4"
                                                                  : "euler");
         },
         [](RunConfig& c, const std::string& v) {
           if (v == "rk4")
             c.sim.integrator = Integrator::rk4;
           else if (v == "euler")
             c.sim.integrator = Integrator::euler;
           else
             throw ConfigError("integrator must be rk4 or euler, got '" + v +
                               "'");
         }});
    add("sim.controller_rate_hz",
        real(&RunConfig::sim, &SimConfig::controller_rate_hz));
    add("sim.decimate",
        {[](const RunConfig& c) { return std::to_string(c.sim.decimate); },
         [](RunConfig& c, const std::string& v) {
           c.sim.decimate = static_cast<int>(parse_int(v));
         }});
    add("sim.seed",
        {[](const RunConfig& c) { return std::to_string(c.sim.seed); },
         [](RunConfig& c, const std::string& v) {
           c.sim.seed = static_cast<std::uint64_t>(parse_int(v));
         }});
    add("sim.pin_pitch",
        {[](const RunConfig& c) {
           return std::string(c.sim.pin_pitch ? "true" : "false");
         },
         [](RunConfig& c, const std::string& v) {
           c.sim.pin_pitch = parse_bool(v);
         }});
    add("sim.divergence_speed",
        real(&RunConfig::sim, &SimConfig::divergence_speed));
    add("sim.divergence_pitch",
        real(&RunConfig::sim, &SimConfig::divergence_pitch));

    add("init.x", {[](const RunConfig& c) {
                     return format_full(c.sim.initial_state.position.x());
                   },
                   [](RunConfig& c, const std::string& v) {
                     c.sim.initial_state.position.x() = parse_double(v);
                   }});
    add("init.z", {[](const RunConfig& c) {
                     return format_full(c.sim.initial_state.position.y());
                   },
                   [](RunConfig& c, const std::string& v) {
                     c.sim.initial_state.position.y() = parse_double(v);
                   }});
    add("init.vx", {[](const RunConfig& c) {
                      return format_full(c.sim.initial_state.velocity.x());
                    },
                    [](RunConfig& c, const std::string& v) {
                      c.sim.initial_state.velocity.x() = parse_double(v);
                    }});
    add("init.vz", {[](const RunConfig& c) {
                      return format_full(c.sim.initial_state.velocity.y());
                    },
                    [](RunConfig& c, const std::string& v) {
                      c.sim.initial_state.velocity.y() = parse_double(v);
                    }});
    add("init.pitch", {[](const RunConfig& c) {
                         return format_full(c.sim.initial_state.pitch);
                       },
                       [](RunConfig& c, const std::string& v) {
                         c.sim.initial_state.pitch = parse_double(v);
                       }});
    add("init.pitch_rate",
        {[](const RunConfig& c) {
           return format_full(c.sim.initial_state.pitch_rate);
         },
         [](RunConfig& c, const std::string& v) {
           c.sim.initial_state.pitch_rate = parse_double(v);
         }});

    add("trajectory.kind",
        {[](const RunConfig& c) { return to_string(c.trajectory); },
         [](RunConfig& c, const std::string& v) {
           if (v == "hover")
             c.trajectory = TrajectoryKind::hover;
           else if (v == "circle")
             c.trajectory = TrajectoryKind::circle;
           else if (v == "helix")
             c.trajectory = TrajectoryKind::helix;
           else if (v == "constant")
             c.trajectory = TrajectoryKind::constant;
           else
             throw ConfigError(
                 "trajectory.kind must be hover, circle, helix, or constant, "
                 "got '" +
                 v + "'");
         }});
    add("trajectory.radius", real(&RunConfig::radius));
    add("trajectory.speed", real(&RunConfig::speed));
    add("trajectory.ramp", real(&RunConfig::ramp));
    add("trajectory.climb_rate", real(&RunConfig::climb_rate));
    add("trajectory.start_x", real(&RunConfig::start_x));
    add("trajectory.start_z", real(&RunConfig::start_z));
    add("trajectory.start_height", real(&RunConfig::start_height));
    add("trajectory.target_x", real(&RunConfig::target_x));
    add("trajectory.target_z", real(&RunConfig::target_z));
    add("trajectory.vx", real(&RunConfig::constant_vx));
    add("trajectory.vz", real(&RunConfig::constant_vz));
    add("trajectory.position_gain", real(&RunConfig::position_gain));
    add("trajectory.speed_cap", real(&RunConfig::speed_cap));

    add("sweep.param",
        {[](const RunConfig& c) { return to_string(c.sweep_param); },
         [](RunConfig& c, const std::string& v) {
           if (v == "buoyancy_arm")
             c.sweep_param = SweepParam::buoyancy_arm;
           else if (v == "mass")
             c.sweep_param = SweepParam::mass;
           else if (v == "speed")
             c.sweep_param = SweepParam::speed;
           else
             throw ConfigError(
                 "sweep.param must be buoyancy_arm, mass, or speed, got '" +
                 v + "'");
         }});
    add("sweep.min", real(&RunConfig::sweep_min));
    add("sweep.max", real(&RunConfig::sweep_max));
    add("sweep.step", real(&RunConfig::sweep_step));
    add("sweep.parallel",
        {[](const RunConfig& c) { return std::to_string(c.sweep_parallel); },
         [](RunConfig& c, const std::string& v) {
           const long long n = parse_int(v);
           if (n < 1) throw ConfigError("sweep.parallel must be >= 1");
           c.sweep_parallel = static_cast<unsigned>(n);
         }});
    add("sweep.circle_speed", real(&RunConfig::sweep_circle_speed));
    add("sweep.duration", real(&RunConfig::sweep_duration));

    add("classify.saturation_fraction_min",
        real(&RunConfig::classify, &ClassifyThresholds::saturation_fraction_min));
    add("classify.degraded_error_ratio",
        real(&RunConfig::classify, &ClassifyThresholds::degraded_error_ratio));
    add("classify.loss_ratio",
        real(&RunConfig::classify, &ClassifyThresholds::loss_ratio));
    add("classify.reference_speed_floor",
        real(&RunConfig::classify, &ClassifyThresholds::reference_speed_floor));
    add("classify.final_window_fraction",
        real(&RunConfig::classify, &ClassifyThresholds::final_window_fraction));

    add("metrics.transient_s", real(&RunConfig::transient_s));

    add("output.dir",
        {[](const RunConfig& c) { return c.output_dir; },
         [](RunConfig& c, const std::string& v) { c.output_dir = v; }});

    return t;
  }();
  return table;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::hover: return "hover";
    case TrajectoryKind::circle: return "circle";
    case TrajectoryKind::helix: return "helix";
    case TrajectoryKind::constant: return "constant";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, const Field*> index;
  for (const auto& [key, field] : fields()) index.emplace(key, &field);

  RunConfig config;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value', got '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    const auto it = index.find(key);
    if (it == index.end())
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (const auto [prev, inserted] = seen.emplace(key, lineno); !inserted)
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "' (first set on line " +
                        std::to_string(prev->second) + ")");
    try {
      it->second->set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ", key '" + key +
                        "': " + e.what());
    }
  }
  return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "# resolved run configuration; every key explicit\n";
  std::string section;
  for (const auto& [key, field] : fields()) {
    const std::string prefix = key.substr(0, key.find('.'));
    if (prefix != section) {
      section = prefix;
      out << '\n';
    }
    out << key << " = " << field.get(c) << '\n';
  }
  return out.str();
}

SweepSpec make_sweep_spec(const RunConfig& c) {
  SweepSpec spec;
  spec.param = c.sweep_param;
  spec.min = c.sweep_min;
  spec.max = c.sweep_max;
  spec.step = c.sweep_step;
  spec.base = c.design;
  spec.gains = c.gains;
  spec.circle_radius = c.radius;
  spec.circle_speed = c.sweep_circle_speed;
  spec.duration = c.sweep_duration;
  spec.dt = c.sim.dt;
  spec.parallelism = c.sweep_parallel;
  spec.transient_s = c.transient_s;
  spec.thresholds = c.classify;
  return spec;
}

}  // namespace sblimp
