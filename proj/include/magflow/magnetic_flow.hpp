#pragma once

#include <string_view>

#include "magflow/hyperbolic.hpp"

namespace magflow {

enum class Regime { Subcritical, Critical, Supercritical };

std::string_view to_string(Regime r);

/// Constant field strength B and energy E of the shell {|xi|^2 / 2 = E}.
class MagneticConfig {
 public:
  /// Throws std::invalid_argument unless B > 0 and E >= 0 (both finite).
  MagneticConfig(double field, double energy);

  double field() const { return field_; }
  double energy() const { return energy_; }
  /// Speed on the shell, sqrt(2E).
  double speed() const { return speed_; }
  double critical_energy() const { return 0.5 * field_ * field_; }
  /// B^2 - 2E, positive below the critical energy.
  double spectral_gap() const { return field_ * field_ - 2.0 * energy_; }
  /// sqrt(|B^2 - 2E|).
  double gamma() const;
  Regime regime() const;

  friend bool operator==(const MagneticConfig&, const MagneticConfig&) = default;

 private:
  double field_;
  double energy_;
  double speed_;
};

inline constexpr double kRegimeTolerance = 1e-12;

Regime regime(const MagneticConfig& cfg);

/// Trace-zero generator [[lambda/2, -B/2], [B/2, -lambda/2]] of the flow on PSL(2,R).
struct FlowGenerator {
  double a, b, c, d;
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
};

FlowGenerator generator(const MagneticConfig& cfg);

/// exp(t F) in closed form (trigonometric, parabolic or hyperbolic branch).
Moebius flow_matrix(const MagneticConfig& cfg, double t);

/// Magnetic flow of a speed-sqrt(2E) tangent vector, via the right action of
/// exp(t F) on the frame of p. Throws std::invalid_argument("off energy shell")
/// if |speed(p) - sqrt(2E)| > 1e-8. At E = 0 returns p unchanged.
HTangent flow_exact(const MagneticConfig& cfg, const HTangent& p, double t);

/// Sign of the almost complex structure in the magnetic force -B j(zdot).
/// Standard is the sign under which the integrator reproduces flow_exact;
/// Flipped reverses it.
enum class Orientation { Standard, Flipped };

struct NumericFlowResult {
  HTangent state;
  /// Set when dt exceeds T_E / 100 in the subcritical regime.
  bool step_too_large = false;
};

/// Fixed-step RK4 integration of the magnetic geodesic equation in
/// half-plane coordinates.
NumericFlowResult flow_numeric(const MagneticConfig& cfg, const HTangent& p, double t, double dt,
                               Orientation orientation = Orientation::Standard);

/// T_E = 2 pi (B^2 - 2E)^{-1/2}; throws std::domain_error at or above E_c.
double period(const MagneticConfig& cfg);

/// Growth rate of the cocycle t -> exp(t F), by multiply-and-renormalize with unit step.
double lyapunov_exponent(const MagneticConfig& cfg, double t_max);

struct VariationCoeffs {
  double a, b, c;
};

VariationCoeffs variation_coeffs(const MagneticConfig& cfg, double t);

/// Initial condition at the center with velocity sqrt(2E) * i rotated by theta.
HTangent shell_start(const MagneticConfig& cfg, double theta = 0.0);

}  // namespace magflow
