#include "magflow/zonal_torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace magflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCenterTolerance = 1e-9;
constexpr double kMergeTolerance = 1e-7;
constexpr double kMassBand = 1e-4;
constexpr int kBisectionLimit = 400;

void require_torus(const MagneticConfig& cfg) {
  if (!(cfg.energy() > 0.0) || cfg.regime() != Regime::Subcritical) {
    throw std::domain_error("torus undefined at this energy");
  }
}

// sinh(phi(t)/2) = (lambda/gamma) |sin(gamma t / 2)|: monotone on each half period.
double profile_sinh(const MagneticConfig& cfg, double t) {
  const double g = cfg.gamma();
  return cfg.speed() / g * std::abs(std::sin(0.5 * g * t));
}

// Bisection to full double resolution of a monotone bracketed predicate.
template <typename Below>
double bisect(double lo, double hi, Below below_target) {
  for (int it = 0; it < kBisectionLimit; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below_target(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Time on the outgoing branch (0, T_E/2] at which the profile reaches d.
double outgoing_time(const MagneticConfig& cfg, double d) {
  const double half = 0.5 * period(cfg);
  if (d <= 0.0) return 0.0;
  if (d >= radius(cfg)) return half;
  const double target = std::sinh(0.5 * d);
  return bisect(0.0, half, [&](double t) { return profile_sinh(cfg, t) < target; });
}

template <typename F>
double composite_gauss(F&& f, double a, double b, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 16>;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += Rule::integrate(f, a + p * h, a + (p + 1) * h);
  }
  return sum;
}

}  // namespace

TorusPoint reduce_torus_point(const MagneticConfig& cfg, TorusPoint p) {
  const double period_t = period(cfg);
  double theta = std::fmod(p.theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  double t = std::fmod(p.t, period_t);
  if (t < 0.0) t += period_t;
  return {theta >= kTwoPi ? 0.0 : theta, t >= period_t ? 0.0 : t};
}

std::string_view to_string(DensityFlag f) {
  switch (f) {
    case DensityFlag::Regular:
      return "Regular";
    case DensityFlag::NearCenter:
      return "NearCenter";
    case DensityFlag::NearBoundary:
      return "NearBoundary";
    case DensityFlag::Outside:
      return "Outside";
  }
  return "Unknown";
}

HPoint psi(const MagneticConfig& cfg, double theta, double t) {
  require_torus(cfg);
  return flow_exact(cfg, shell_start(cfg, theta), t).base;
}

double radius(const MagneticConfig& cfg) {
  if (cfg.energy() == 0.0) return 0.0;
  if (cfg.regime() != Regime::Subcritical) {
    throw std::domain_error("radius undefined at or above critical energy");
  }
  const double b2 = cfg.field() * cfg.field();
  const double e2 = 2.0 * cfg.energy();
  // cosh R - 1 = 4E / (B^2 - 2E); acosh(1 + x) = 2 asinh(sqrt(x/2)).
  return 2.0 * std::asinh(std::sqrt(e2 / (b2 - e2)));
}

double phi_profile(const MagneticConfig& cfg, double t) {
  return hyp_dist(HPoint::center(), psi(cfg, 0.0, t));
}

double jacobian(const MagneticConfig& cfg, double /*theta*/, double t) {
  return 2.0 * cfg.energy() * std::abs(variation_coeffs(cfg, t).b);
}

std::vector<double> preimage_times(const MagneticConfig& cfg, double d) {
  require_torus(cfg);
  if (!(d > 0.0)) {
    throw std::domain_error("degenerate center: full circle fiber");
  }
  const double full = period(cfg);
  const double half = 0.5 * full;
  const double r = radius(cfg);
  // Points computed at the caustic land a few ulps on either side of it.
  const double slack = 1e-12 * (1.0 + r);
  if (d > r + slack) return {};
  if (d >= r) return {half};

  const double target = std::sinh(0.5 * d);
  const double t_out = bisect(0.0, half, [&](double t) { return profile_sinh(cfg, t) < target; });
  const double t_back = bisect(half, full, [&](double t) { return profile_sinh(cfg, t) >= target; });
  if (t_back - t_out < kMergeTolerance) return {0.5 * (t_out + t_back)};
  return {t_out, t_back};
}

std::vector<TorusPoint> preimages_cover(const MagneticConfig& cfg, const HPoint& y) {
  require_torus(cfg);
  const double d = hyp_dist(HPoint::center(), y);
  if (d < kCenterTolerance) {
    throw std::domain_error("degenerate center: full circle fiber");
  }
  std::vector<TorusPoint> out;
  const double target_angle = std::arg(to_disk(y));
  for (double t : preimage_times(cfg, d)) {
    // Psi(theta, t) is Psi(0, t) rotated about i by theta.
    const double reference_angle = std::arg(to_disk(psi(cfg, 0.0, t)));
    out.push_back(reduce_torus_point(cfg, {target_angle - reference_angle, t}));
  }
  return out;
}

double alpha_raw_at_distance(const MagneticConfig& cfg, double d) {
  double alpha = 0.0;
  for (double t : preimage_times(cfg, d)) {
    const double jac = jacobian(cfg, 0.0, t);
    if (jac == 0.0) return std::numeric_limits<double>::infinity();
    alpha += 1.0 / jac;
  }
  return alpha;
}

DensitySample density_cover(const MagneticConfig& cfg, const HPoint& y, BandWidths bands) {
  const std::vector<TorusPoint> pre = preimages_cover(cfg, y);
  const double d = hyp_dist(HPoint::center(), y);
  const double r = radius(cfg);
  double alpha = 0.0;
  for (const TorusPoint& p : pre) {
    const double jac = jacobian(cfg, p.theta, p.t);
    alpha = jac == 0.0 ? std::numeric_limits<double>::infinity() : alpha + 1.0 / jac;
  }
  DensityFlag flag = DensityFlag::Regular;
  if (pre.empty()) {
    flag = DensityFlag::Outside;
  } else if (d < bands.center * r) {
    flag = DensityFlag::NearCenter;
  } else if (std::abs(d - r) < bands.boundary * r) {
    flag = DensityFlag::NearBoundary;
  }
  return DensitySample{y, d, alpha, alpha / (kTwoPi * period(cfg)), pre, flag};
}

double density_mass(const MagneticConfig& cfg, int radial_nodes) {
  require_torus(cfg);
  if (radial_nodes < 64) {
    throw std::invalid_argument("quadrature resolution too coarse (need >= 64 radial nodes)");
  }
  const double r = radius(cfg);
  const double w = std::min(kMassBand, 0.25 * r);
  const int panels = std::max(1, radial_nodes / 32);
  const double split = 0.5 * r;

  auto ring_density = [&](double rho) { return kTwoPi * alpha_raw_at_distance(cfg, rho) * std::sinh(rho); };
  // Inner part in r; the 1/r blow-up of alpha is cancelled by sinh r.
  const double inner = composite_gauss(ring_density, w, split, panels);
  // Outer part with r = R - s^2, which absorbs the inverse square root at the caustic.
  auto substituted = [&](double s) { return ring_density(r - s * s) * 2.0 * s; };
  const double outer = composite_gauss(substituted, std::sqrt(w), std::sqrt(r - split), panels);

  const double center_band = kTwoPi * center_singularity_constant(cfg) * w;
  const double boundary_band = kTwoPi * std::sinh(r) * boundary_singularity_constant(cfg) * 2.0 * std::sqrt(w);
  return inner + outer + center_band + boundary_band;
}

double density_mass_annulus(const MagneticConfig& cfg, double r_lo, double r_hi, int radial_nodes) {
  require_torus(cfg);
  if (radial_nodes < 64) {
    throw std::invalid_argument("quadrature resolution too coarse (need >= 64 radial nodes)");
  }
  if (!(r_hi > r_lo) || r_lo < 0.0) throw std::invalid_argument("empty annulus");
  auto ring_density = [&](double rho) {
    if (rho <= 0.0) return kTwoPi * center_singularity_constant(cfg);
    return kTwoPi * alpha_raw_at_distance(cfg, rho) * std::sinh(rho);
  };
  return composite_gauss(ring_density, r_lo, r_hi, std::max(1, radial_nodes / 16));
}

double ring_mass_exact(const MagneticConfig& cfg, double r_lo, double r_hi) {
  require_torus(cfg);
  const double r = radius(cfg);
  const double lo = std::clamp(r_lo, 0.0, r);
  const double hi = std::clamp(r_hi, 0.0, r);
  if (hi <= lo) return 0.0;
  // Both branches of the profile contribute the same time measure.
  return kTwoPi * 2.0 * (outgoing_time(cfg, hi) - outgoing_time(cfg, lo));
}

double center_singularity_constant(const MagneticConfig& cfg) {
  return std::sqrt(2.0 / cfg.energy());
}

double boundary_singularity_constant(const MagneticConfig& cfg) {
  const double b = cfg.field();
  const double e = cfg.energy();
  return std::sqrt(std::sqrt(2.0 * e) * (b * b - 2.0 * e) / (4.0 * b)) / e;
}

}  // namespace magflow
