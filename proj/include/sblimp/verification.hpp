#pragma once

#include <string>
#include <vector>

#include "sblimp/params.hpp"

namespace sblimp {

struct VerificationCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // failure explanation; empty on pass
};

// Built-in property suite over a concrete design: allocation coupling
// identity, feedback-linearization round trip, clamp idempotence, analytic
// closed-loop velocity match, pendulum decay with monotone energy, and
// trajectory self-consistency. Checks that cannot run (invalid parameters,
// degenerate design) are reported as failures, never thrown.
std::vector<VerificationCheck> run_verification(const DesignParams& design,
                                                const ControllerGains& gains);

}  // namespace sblimp
