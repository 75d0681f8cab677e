#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sblimp/model.hpp"
#include "sblimp/params.hpp"
#include "sblimp/simulator.hpp"

namespace sblimp {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using AllocationMatrix = Eigen::Matrix<double, 5, 4>;

// Quasi-3D pose and twist. Yaw is structurally fixed at zero; pitch couples
// to x, roll to y, and the vertical axis is shared. Angles stay unwrapped.
struct SpatialState {
  Vec3 position{0.0, 0.0, 0.0};
  Vec3 velocity{0.0, 0.0, 0.0};
  double pitch = 0.0;
  double roll = 0.0;
  double pitch_rate = 0.0;
  double roll_rate = 0.0;

  bool finite() const;
};

// Four clamped rotor thrusts with per-rotor saturation flags. Rotors 1-2 form
// the xz (pitch) pair, rotors 3-4 the yz (roll) pair.
struct QuadCommand {
  Vec4 thrust{0.0, 0.0, 0.0, 0.0};
  std::array<bool, 4> saturated{false, false, false, false};

  bool any_saturated() const {
    return saturated[0] || saturated[1] || saturated[2] || saturated[3];
  }
};

// Maps four thrusts to (f_x, f_y, f_z, torque_pitch, torque_roll) in the body
// frame. Columns 1-2 reproduce the planar allocation in the xz plane, columns
// 3-4 mirror it into the yz plane; the 3x4 force block has rank 3 whenever
// tilt != 0. Throws DegenerateDesignError when tilt == 0.
AllocationMatrix spatial_allocation(const DesignParams& p);

// Per-plane velocity controller: the xz pair cancels pitch and tracks
// (vx, vz), the yz pair cancels roll and tracks (vy, vz); each pair carries
// half of the buoyancy-deficit compensation and half of the vertical
// feedback, so the summed closed loop matches the planar law on each plane.
QuadCommand spatial_velocity_command(const DesignParams& p,
                                     const ControllerGains& g, double pitch,
                                     double roll, const Vec3& v_desired,
                                     const Vec3& v);

// 3-D reference sample.
struct SpatialSample {
  Vec3 velocity{0.0, 0.0, 0.0};
  Vec3 position{0.0, 0.0, 0.0};
};

class SpatialTrajectory {
public:
  virtual ~SpatialTrajectory() = default;
  virtual SpatialSample at(double t, const SpatialState& s) const = 0;
};

// Fixed 3-D velocity setpoint.
class ConstantVelocity3 final : public SpatialTrajectory {
public:
  ConstantVelocity3(const Vec3& velocity, const Vec3& start);
  SpatialSample at(double t, const SpatialState& s) const override;

private:
  Vec3 velocity_;
  Vec3 start_;
};

// Horizontal circle in the xy plane at constant speed and height.
class CircleXY final : public SpatialTrajectory {
public:
  CircleXY(double radius, double speed, const Vec3& start);
  SpatialSample at(double t, const SpatialState& s) const override;

private:
  double radius_;
  double speed_;
  Vec3 start_;
};

// Ascending circle: planar speed ramps as v(t) = v0 + ramp t (phase is the
// exact quadratic integral), vertical speed constant at climb_rate.
class Helix final : public SpatialTrajectory {
public:
  Helix(double radius, double v0, double ramp, double climb_rate,
        const Vec3& start);
  SpatialSample at(double t, const SpatialState& s) const override;
  double planar_speed(double t) const { return v0_ + ramp_ * t; }

private:
  double radius_;
  double v0_;
  double ramp_;
  double climb_rate_;
  Vec3 start_;
};

// Planar trajectory embedded in the xz plane (y components zero); used to
// compare plane-confined spatial runs against the planar model.
class PlanarInXZ final : public SpatialTrajectory {
public:
  explicit PlanarInXZ(std::shared_ptr<const Trajectory> planar);
  SpatialSample at(double t, const SpatialState& s) const override;

private:
  std::shared_ptr<const Trajectory> planar_;
};

struct SpatialRecord {
  double t = 0.0;
  SpatialState state{};
  QuadCommand command{};
  Vec3 velocity_ref{0.0, 0.0, 0.0};
  Vec3 position_ref{0.0, 0.0, 0.0};
  Vec3 velocity_error{0.0, 0.0, 0.0};
  Vec3 position_error{0.0, 0.0, 0.0};
  double pitch_error = 0.0;
  double roll_error = 0.0;
};

struct SpatialLog {
  std::vector<SpatialRecord> records;
  bool diverged = false;
  std::string divergence_reason;
  double dt = 0.0;
  int decimate = 1;
  std::size_t steps_executed = 0;
  std::size_t steps_saturated = 0;
  double duration_completed = 0.0;
};

// Mirrors the planar run() over SpatialState: same integrators, same
// continuous/held controller modes, same divergence envelope applied to
// |v| and to both angles. pin_pitch freezes both angles.
SpatialLog spatial_run(const DesignParams& p, const ControllerGains& g,
                       const SimConfig& c, const SpatialTrajectory& trajectory,
                       const SpatialState& initial);

// Single spatial step under a fixed setpoint, mirroring simulator step().
SpatialState spatial_step(const DesignParams& p, const ControllerGains& g,
                          const SimConfig& c, const SpatialState& s,
                          const Vec3& v_desired);

// Planar-metric view of a spatial log: error norms, reference speed, and
// saturation flags packed into a SimLog so metrics() and
// classify_stability() apply unchanged. Component-level fields (positions,
// commands) are reduced and must not be read as planar quantities.
SimLog planar_metric_view(const SpatialLog& log);

}  // namespace sblimp
