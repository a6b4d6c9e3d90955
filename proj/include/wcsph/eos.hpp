#pragma once

namespace wcsph {

// Linear weakly-compressible equation of state with optional background
// pressure: p = c_o^2 (rho - rho_o) + p_b. The inverse is exact, so
// pressure<->density round-trips are identities.
struct Eos {
  double c_o = 20.0;
  double rho_o = 1.0;
  double p_b = 0.0;

  double pressure(double rho) const { return c_o * c_o * (rho - rho_o) + p_b; }
  double density(double p) const { return rho_o + (p - p_b) / (c_o * c_o); }
};

}  // namespace wcsph
