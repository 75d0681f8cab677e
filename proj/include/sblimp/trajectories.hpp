#pragma once

#include <memory>

#include "sblimp/model.hpp"

namespace sblimp {

// Velocity setpoint plus the reference position it integrates to.
struct TrajectorySample {
  Vec2 velocity{0.0, 0.0};
  Vec2 position{0.0, 0.0};
};

// Reference generator. Samples may depend on the current state (the hover
// reference closes an outer position loop); time-parameterized references
// ignore the state.
class Trajectory {
public:
  virtual ~Trajectory() = default;
  virtual TrajectorySample at(double t, const PlanarState& s) const = 0;
};

// Fixed setpoint; reference position drifts from start at the set velocity.
class ConstantVelocity final : public Trajectory {
public:
  ConstantVelocity(const Vec2& velocity, const Vec2& start);
  TrajectorySample at(double t, const PlanarState& s) const override;

private:
  Vec2 velocity_;
  Vec2 start_;
};

// Circle traversed at constant speed: v_d = speed [-sin(wt), cos(wt)] with
// w = speed / radius. The path starts at `start` and the speed profile is
// exact: |v_d(t)| == speed for all t.
class Circle final : public Trajectory {
public:
  Circle(double radius, double speed, const Vec2& start);
  TrajectorySample at(double t, const PlanarState& s) const override;
  double radius() const { return radius_; }
  double speed() const { return speed_; }

private:
  double radius_;
  double speed_;
  Vec2 start_;
};

// Station keeping: outer proportional position loop feeding the velocity
// controller, with the commanded speed capped below the saturation regime.
class Hover final : public Trajectory {
public:
  explicit Hover(const Vec2& target, double position_gain = 0.5,
                 double speed_cap = 0.3);
  TrajectorySample at(double t, const PlanarState& s) const override;

private:
  Vec2 target_;
  double position_gain_;
  double speed_cap_;
};

}  // namespace sblimp
