#pragma once

#include <filesystem>
#include <string>

#include "sblimp/experiments.hpp"
#include "sblimp/simulator.hpp"
#include "sblimp/spatial3d.hpp"

namespace sblimp {

inline constexpr const char* kPlanarCsvHeader =
    "t,x,z,theta,vx,vz,theta_dot,f1,f2,sat1,sat2,vdx,vdz,ex,ez,etheta";

inline constexpr const char* kSpatialCsvHeader =
    "t,x,y,z,theta,phi,vx,vy,vz,theta_dot,phi_dot,f1,f2,f3,f4,"
    "sat1,sat2,sat3,sat4,vdx,vdy,vdz,ex,ey,ez,etheta,ephi";

inline constexpr const char* kSweepCsvHeader =
    "param_value,max_verr,avg_verr,max_aerr,avg_aerr,max_perr,avg_perr,"
    "sat_frac,class";

// Floating-point CSV fields carry 9 significant digits.
std::string format_sig9(double v);

void write_planar_csv(const SimLog& log, const std::filesystem::path& path);
void write_spatial_csv(const SpatialLog& log,
                       const std::filesystem::path& path);
void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& path);

// Two-column plot-ready data file: grid value against one metric column.
enum class SweepMetric {
  max_velocity_error,
  avg_velocity_error,
  max_angular_error,
  avg_angular_error,
  max_position_error,
  avg_position_error,
  saturation_fraction
};

void write_sweep_plot_data(const SweepReport& report, SweepMetric metric,
                           const std::filesystem::path& path);

// Gnuplot script rendering the standard sweep figure from the .dat files
// written next to it.
void write_sweep_gnuplot(const SweepReport& report,
                         const std::filesystem::path& path);

}  // namespace sblimp
