#pragma once

#include <cmath>

namespace toa {

/// Physical constants. All strictly positive; validate() enforces it.
struct PhysParams {
  double hbar = 1.0;
  double c = 1.0;
  double m0 = 1.0;

  static PhysParams natural() { return {}; }

  /// Throws ConfigError unless every constant is finite and positive.
  void validate() const;

  /// Relativistic dispersion E_p = +sqrt(p^2 c^2 + m0^2 c^4).
  double energy(double p) const { return std::sqrt(p * p * c * c + m0 * m0 * c * c * c * c); }
  /// dE_p/dp = p c^2 / E_p.
  double group_velocity(double p) const { return p * c * c / energy(p); }
  double rest_energy() const { return m0 * c * c; }
};

}  // namespace toa
