#include "sblimp/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sblimp {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

double metric_value(const SweepPoint& p, SweepMetric metric) {
  switch (metric) {
    case SweepMetric::max_velocity_error: return p.m.max_velocity_error;
    case SweepMetric::avg_velocity_error: return p.m.avg_velocity_error;
    case SweepMetric::max_angular_error: return p.m.max_angular_error;
    case SweepMetric::avg_angular_error: return p.m.avg_angular_error;
    case SweepMetric::max_position_error: return p.m.max_position_error;
    case SweepMetric::avg_position_error: return p.m.avg_position_error;
    case SweepMetric::saturation_fraction: return p.m.saturation_fraction;
  }
  return 0.0;
}

}  // namespace

std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_planar_csv(const SimLog& log, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kPlanarCsvHeader << '\n';
  for (const SimRecord& r : log.records) {
    out << format_sig9(r.t) << ',' << format_sig9(r.state.position.x()) << ','
        << format_sig9(r.state.position.y()) << ','
        << format_sig9(r.state.pitch) << ','
        << format_sig9(r.state.velocity.x()) << ','
        << format_sig9(r.state.velocity.y()) << ','
        << format_sig9(r.state.pitch_rate) << ','
        << format_sig9(r.command.thrust[0]) << ','
        << format_sig9(r.command.thrust[1]) << ','
        << (r.command.saturated[0] ? 1 : 0) << ','
        << (r.command.saturated[1] ? 1 : 0) << ','
        << format_sig9(r.velocity_ref.x()) << ','
        << format_sig9(r.velocity_ref.y()) << ','
        << format_sig9(r.position_error.x()) << ','
        << format_sig9(r.position_error.y()) << ','
        << format_sig9(r.angular_error) << '\n';
  }
}

void write_spatial_csv(const SpatialLog& log,
                       const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kSpatialCsvHeader << '\n';
  for (const SpatialRecord& r : log.records) {
    out << format_sig9(r.t) << ',' << format_sig9(r.state.position.x()) << ','
        << format_sig9(r.state.position.y()) << ','
        << format_sig9(r.state.position.z()) << ','
        << format_sig9(r.state.pitch) << ',' << format_sig9(r.state.roll)
        << ',' << format_sig9(r.state.velocity.x()) << ','
        << format_sig9(r.state.velocity.y()) << ','
        << format_sig9(r.state.velocity.z()) << ','
        << format_sig9(r.state.pitch_rate) << ','
        << format_sig9(r.state.roll_rate);
    for (int i = 0; i < 4; ++i) out << ',' << format_sig9(r.command.thrust[i]);
    for (int i = 0; i < 4; ++i) out << ',' << (r.command.saturated[i] ? 1 : 0);
    out << ',' << format_sig9(r.velocity_ref.x()) << ','
        << format_sig9(r.velocity_ref.y()) << ','
        << format_sig9(r.velocity_ref.z()) << ','
        << format_sig9(r.position_error.x()) << ','
        << format_sig9(r.position_error.y()) << ','
        << format_sig9(r.position_error.z()) << ','
        << format_sig9(r.pitch_error) << ',' << format_sig9(r.roll_error)
        << '\n';
  }
}

void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kSweepCsvHeader << '\n';
  for (const SweepPoint& p : report.points) {
    out << format_sig9(p.value) << ',';
    if (p.valid_config) {
      out << format_sig9(p.m.max_velocity_error) << ','
          << format_sig9(p.m.avg_velocity_error) << ','
          << format_sig9(p.m.max_angular_error) << ','
          << format_sig9(p.m.avg_angular_error) << ','
          << format_sig9(p.m.max_position_error) << ','
          << format_sig9(p.m.avg_position_error) << ','
          << format_sig9(p.m.saturation_fraction) << ','
          << to_string(p.cls) << '\n';
    } else {
      out << "nan,nan,nan,nan,nan,nan,nan,invalid-config\n";
    }
  }
}

void write_sweep_plot_data(const SweepReport& report, SweepMetric metric,
                           const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const SweepPoint& p : report.points) {
    if (!p.valid_config) continue;
    out << format_sig9(p.value) << ' ' << format_sig9(metric_value(p, metric))
        << '\n';
  }
}

void write_sweep_gnuplot(const SweepReport& report,
                         const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  const std::string param = to_string(report.param);
  out << "set terminal pngcairo size 900,600\n"
      << "set output 'sweep.png'\n"
      << "set xlabel '" << param << "'\n"
      << "set ylabel 'velocity error (m/s)'\n"
      << "set y2label 'saturation fraction'\n"
      << "set y2range [0:1.05]\n"
      << "set y2tics\n"
      << "set key left top\n"
      << "plot 'avg_verr.dat' with lines title 'avg velocity error', \\\n"
      << "     'max_verr.dat' with lines title 'max velocity error', \\\n"
      << "     'sat_frac.dat' axes x1y2 with lines title 'saturation "
         "fraction'\n";
}

}  // namespace sblimp
