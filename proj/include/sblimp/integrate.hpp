#pragma once

namespace sblimp::detail {

// One fixed step of classic RK4. f(t, y) -> dy/dt over any vector type with
// scalar multiply and addition.
template <typename Vec, typename Fn>
Vec rk4_step(const Vec& y, double t, double dt, Fn&& f) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k1));
  const Vec k3 = f(t + 0.5 * dt, Vec(y + 0.5 * dt * k2));
  const Vec k4 = f(t + dt, Vec(y + dt * k3));
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <typename Vec, typename Fn>
Vec euler_step(const Vec& y, double t, double dt, Fn&& f) {
  return y + dt * f(t, y);
}

}  // namespace sblimp::detail
