#include "magflow/magnetic_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace magflow {

namespace {

constexpr double kShellTolerance = 1e-8;
// Below this |q s^2| the Taylor branch is used for the trig/hyperbolic kernels.
constexpr double kSeriesThreshold = 1e-4;

// Kernels of exp(s F) with q = B^2 - 2E, continuous through q = 0:
//   cos_kernel(q, s)  = cos(sqrt(q) s)           (cosh branch for q < 0)
//   sin_kernel(q, s)  = sin(sqrt(q) s)/sqrt(q)   (sinh branch for q < 0)
//   vers_kernel(q, s) = (1 - cos(sqrt(q) s))/q   = integral of sin_kernel
double cos_kernel(double q, double s) {
  const double u = q * s * s;
  if (std::abs(u) < kSeriesThreshold) {
    return 1.0 - u / 2.0 + u * u / 24.0 - u * u * u / 720.0;
  }
  return q > 0.0 ? std::cos(std::sqrt(q) * s) : std::cosh(std::sqrt(-q) * s);
}

double sin_kernel(double q, double s) {
  const double u = q * s * s;
  if (std::abs(u) < kSeriesThreshold) {
    return s * (1.0 - u / 6.0 + u * u / 120.0 - u * u * u / 5040.0);
  }
  if (q > 0.0) {
    const double g = std::sqrt(q);
    return std::sin(g * s) / g;
  }
  const double g = std::sqrt(-q);
  return std::sinh(g * s) / g;
}

double vers_kernel(double q, double s) {
  const double u = q * s * s;
  if (std::abs(u) < kSeriesThreshold) {
    return s * s * (0.5 - u / 24.0 + u * u / 720.0 - u * u * u / 40320.0);
  }
  if (q > 0.0) {
    // 1 - cos(x) written as 2 sin^2(x/2).
    const double h = std::sin(0.5 * std::sqrt(q) * s);
    return 2.0 * h * h / q;
  }
  const double h = std::sinh(0.5 * std::sqrt(-q) * s);
  return 2.0 * h * h / -q;
}

void require_on_shell(const MagneticConfig& cfg, const HTangent& p) {
  if (std::abs(p.speed() - cfg.speed()) > kShellTolerance) {
    throw std::invalid_argument("off energy shell");
  }
}

using State = std::array<double, 4>;  // x, y, xdot, ydot

State magnetic_rhs(const State& s, double field, double sigma) {
  const double x_dot = s[2];
  const double y_dot = s[3];
  const double y = s[1];
  // Christoffel terms of dx^2+dy^2 over y^2, plus the force -B j(zdot).
  return {x_dot, y_dot, 2.0 * x_dot * y_dot / y + sigma * field * y_dot,
          (y_dot * y_dot - x_dot * x_dot) / y - sigma * field * x_dot};
}

State axpy(const State& s, double h, const State& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]};
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical:
      return "Subcritical";
    case Regime::Critical:
      return "Critical";
    case Regime::Supercritical:
      return "Supercritical";
  }
  return "Unknown";
}

MagneticConfig::MagneticConfig(double field, double energy)
    : field_(field), energy_(energy), speed_(0.0) {
  if (!std::isfinite(field) || !(field > 0.0)) {
    throw std::invalid_argument("magnetic field B must be positive");
  }
  if (!std::isfinite(energy) || energy < 0.0) {
    throw std::invalid_argument("energy E must be nonnegative");
  }
  speed_ = std::sqrt(2.0 * energy);
}

double MagneticConfig::gamma() const { return std::sqrt(std::abs(spectral_gap())); }

Regime MagneticConfig::regime() const {
  const double q = spectral_gap();
  if (std::abs(q) <= kRegimeTolerance) return Regime::Critical;
  return q > 0.0 ? Regime::Subcritical : Regime::Supercritical;
}

Regime regime(const MagneticConfig& cfg) { return cfg.regime(); }

FlowGenerator generator(const MagneticConfig& cfg) {
  const double l = cfg.speed();
  const double b = cfg.field();
  return {0.5 * l, -0.5 * b, 0.5 * b, -0.5 * l};
}

Moebius flow_matrix(const MagneticConfig& cfg, double t) {
  const double q = cfg.spectral_gap();
  const FlowGenerator f = generator(cfg);
  const double ck = cos_kernel(q, 0.5 * t);
  const double sk = 2.0 * sin_kernel(q, 0.5 * t);
  return Moebius::from_entries(ck + sk * f.a, sk * f.b, sk * f.c, ck + sk * f.d);
}

HTangent flow_exact(const MagneticConfig& cfg, const HTangent& p, double t) {
  require_on_shell(cfg, p);
  if (cfg.energy() == 0.0) return p;
  const HTangent unit{p.base, p.v / std::abs(p.v) * p.base.y()};
  const HTangent moved = orbit_frame(frame_of(unit) * flow_matrix(cfg, t));
  return HTangent{moved.base, moved.v * cfg.speed()};
}

NumericFlowResult flow_numeric(const MagneticConfig& cfg, const HTangent& p, double t, double dt,
                               Orientation orientation) {
  if (!(dt > 0.0)) throw std::invalid_argument("step dt must be positive");
  require_on_shell(cfg, p);
  NumericFlowResult result{p, false};
  if (cfg.regime() == Regime::Subcritical && dt > period(cfg) / 100.0) {
    result.step_too_large = true;
  }
  if (cfg.energy() == 0.0 || t == 0.0) return result;

  const double sigma = orientation == Orientation::Standard ? 1.0 : -1.0;
  const double field = cfg.field();
  const auto steps = static_cast<long long>(std::ceil(std::abs(t) / dt));
  const double h = t / static_cast<double>(steps);

  State s{p.base.x(), p.base.y(), p.v.real(), p.v.imag()};
  for (long long n = 0; n < steps; ++n) {
    const State k1 = magnetic_rhs(s, field, sigma);
    const State k2 = magnetic_rhs(axpy(s, 0.5 * h, k1), field, sigma);
    const State k3 = magnetic_rhs(axpy(s, 0.5 * h, k2), field, sigma);
    const State k4 = magnetic_rhs(axpy(s, h, k3), field, sigma);
    for (std::size_t i = 0; i < 4; ++i) {
      s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  result.state = HTangent{HPoint{s[0], s[1]}, Complex{s[2], s[3]}};
  return result;
}

double period(const MagneticConfig& cfg) {
  if (cfg.regime() != Regime::Subcritical) {
    throw std::domain_error("no period at or above critical energy");
  }
  return 2.0 * std::numbers::pi / std::sqrt(cfg.spectral_gap());
}

double lyapunov_exponent(const MagneticConfig& cfg, double t_max) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  const Moebius step = flow_matrix(cfg, 1.0);
  const auto steps = static_cast<long long>(std::ceil(t_max));
  double vx = std::cos(1.0);
  double vy = std::sin(1.0);
  double log_growth = 0.0;
  for (long long n = 0; n < steps; ++n) {
    const double nx = step.a() * vx + step.b() * vy;
    const double ny = step.c() * vx + step.d() * vy;
    const double norm = std::hypot(nx, ny);
    log_growth += std::log(norm);
    vx = nx / norm;
    vy = ny / norm;
  }
  return std::max(0.0, log_growth / static_cast<double>(steps));
}

VariationCoeffs variation_coeffs(const MagneticConfig& cfg, double t) {
  const double q = cfg.spectral_gap();
  const double integral_b = vers_kernel(q, t);
  return {-cfg.field() * integral_b, sin_kernel(q, t), 1.0 + 2.0 * cfg.energy() * integral_b};
}

HTangent shell_start(const MagneticConfig& cfg, double theta) {
  return rotate_fiber(HTangent{HPoint::center(), kI * cfg.speed()}, theta);
}

}  // namespace magflow
