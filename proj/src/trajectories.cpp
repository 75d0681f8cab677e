#include "sblimp/trajectories.hpp"

#include <cmath>
#include <stdexcept>

namespace sblimp {

ConstantVelocity::ConstantVelocity(const Vec2& velocity, const Vec2& start)
    : velocity_(velocity), start_(start) {}

TrajectorySample ConstantVelocity::at(double t, const PlanarState&) const {
  return {velocity_, start_ + t * velocity_};
}

Circle::Circle(double radius, double speed, const Vec2& start)
    : radius_(radius), speed_(speed), start_(start) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be > 0");
  if (!(speed > 0.0)) throw std::invalid_argument("circle speed must be > 0");
}

TrajectorySample Circle::at(double t, const PlanarState&) const {
  const double phase = speed_ / radius_ * t;
  TrajectorySample ref;
  ref.velocity = speed_ * Vec2{-std::sin(phase), std::cos(phase)};
  ref.position =
      start_ + radius_ * Vec2{std::cos(phase) - 1.0, std::sin(phase)};
  return ref;
}

Hover::Hover(const Vec2& target, double position_gain, double speed_cap)
    : target_(target), position_gain_(position_gain), speed_cap_(speed_cap) {
  if (!(position_gain > 0.0))
    throw std::invalid_argument("hover position gain must be > 0");
  if (!(speed_cap > 0.0)) throw std::invalid_argument("speed cap must be > 0");
}

TrajectorySample Hover::at(double, const PlanarState& s) const {
  Vec2 v = position_gain_ * (target_ - s.position);
  const double mag = v.norm();
  if (mag > speed_cap_) v *= speed_cap_ / mag;
  return {v, target_};
}

}  // namespace sblimp
