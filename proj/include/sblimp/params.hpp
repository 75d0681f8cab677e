#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace sblimp {

// Raised when a design is structurally uncontrollable (zero rotor tilt makes
// the thrust allocation singular).
class DegenerateDesignError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Per-rotor thrust limits, N. 0 <= thrust_min < thrust_max.
struct ThrustLimits {
  double thrust_min = 0.0;
  double thrust_max = 0.15;
};

// Physical and actuation constants of one vehicle. SI units throughout.
// Rotor 1 sits at [+rotor_offset_x, rotor_offset_z] with tilt -tilt,
// rotor 2 at [-rotor_offset_x, rotor_offset_z] with tilt +tilt.
struct DesignParams {
  double mass = 0.06;              // kg
  double gravity = 9.81;           // m/s^2
  double buoyancy = 0.55;          // N, upward force from the balloon
  double buoyancy_arm = 0.3;       // m, center of lift above center of mass (> 0)
  double inertia_pitch = 0.01;     // kg m^2
  double rotor_offset_x = 0.04;    // m (> 0)
  double rotor_offset_z = -0.01;   // m (< 0, rotors below the center of mass)
  double tilt = std::numbers::pi / 6.0;  // rad, in (-pi/2, pi/2)
  double drag_x = 0.05;            // N s/m (> 0)
  double drag_z = 0.05;            // N s/m (> 0)
  double drag_pitch = 0.005;       // N m s (> 0)
  ThrustLimits limits{};
};

// Velocity-loop proportional gains, N s/m. Positive-definite diagonal.
struct ControllerGains {
  double k_vx = 0.5;
  double k_vz = 0.5;
};

// Throws std::invalid_argument naming the offending field. Zero tilt is
// accepted here; only controller construction requires tilt != 0.
void validate(const DesignParams& p);
void validate(const ControllerGains& g);

// Net weight minus buoyancy, N. Positive for a heavier-than-lift vehicle.
double buoyancy_deficit(const DesignParams& p);

// Per-rotor thrust that balances the buoyancy deficit at level pitch, N.
double hover_thrust(const DesignParams& p);

// Mass above which level flight cannot be sustained at full throttle:
// m g > f_b + 2 f_max cos(tilt).
double critical_mass(const DesignParams& p);

// Mass below which the rotors cannot push down against excess buoyancy
// (thrust_min = 0 assumed non-negative): m g < f_b.
double neutral_buoyancy_mass(const DesignParams& p);

}  // namespace sblimp
