#pragma once

#include <string_view>
#include <vector>

#include "magflow/hyperbolic.hpp"
#include "magflow/magnetic_flow.hpp"

namespace magflow {

/// (theta, t) on the torus swept by the flow-out of the circle of
/// covectors at the center: theta in [0, 2 pi), t in [0, T_E).
struct TorusPoint {
  double theta;
  double t;
};

/// Reduces both coordinates modulo their periods.
TorusPoint reduce_torus_point(const MagneticConfig& cfg, TorusPoint p);

enum class DensityFlag { Regular, NearCenter, NearBoundary, Outside };

std::string_view to_string(DensityFlag f);

/// Widths of the singular bands as fractions of R_E.
struct BandWidths {
  double center = 1e-3;
  double boundary = 1e-3;
};

struct DensitySample {
  HPoint point;
  double distance_to_center;
  /// Density of the pushforward of dtheta dt against hyperbolic area.
  double alpha_raw;
  /// alpha_raw / (2 pi T_E), the density of the probability measure.
  double alpha_normalized;
  std::vector<TorusPoint> preimages;
  DensityFlag flag;
};

/// Base point of the flow at time t started from the covector rotated by theta.
/// Requires 0 < E < E_c; throws std::domain_error("torus undefined at this energy").
HPoint psi(const MagneticConfig& cfg, double theta, double t);

/// R_E with cosh R_E = (B^2 + 2E)/(B^2 - 2E), for 0 <= E < E_c.
double radius(const MagneticConfig& cfg);

/// phi(t) = d(i, psi(0, t)).
double phi_profile(const MagneticConfig& cfg, double t);

/// |det dPsi| against hyperbolic area, 2E |b(t)|.
double jacobian(const MagneticConfig& cfg, double theta, double t);

/// Flow times in (0, T_E) at which the distance profile equals d: two for
/// 0 < d < R_E, one (T_E / 2) on the caustic, none beyond it.
std::vector<double> preimage_times(const MagneticConfig& cfg, double d);

/// All (theta, t) with psi(theta, t) = y on the universal cover.
/// Throws std::domain_error("degenerate center: full circle fiber") for y = i.
std::vector<TorusPoint> preimages_cover(const MagneticConfig& cfg, const HPoint& y);

/// sum over preimages of 1 / jacobian, as a function of d(i, y) only.
double alpha_raw_at_distance(const MagneticConfig& cfg, double d);

DensitySample density_cover(const MagneticConfig& cfg, const HPoint& y, BandWidths bands = {});

/// Integral of alpha_raw against hyperbolic area over the disk of radius R_E,
/// using Gauss-Legendre panels with `radial_nodes` nodes off bands of width
/// 1e-4 at the center and caustic; the bands are added from the leading
/// asymptotics. Throws std::invalid_argument if radial_nodes < 64.
double density_mass(const MagneticConfig& cfg, int radial_nodes);

/// Plain quadrature of alpha_raw over the annulus r_lo < d(i, y) < r_hi.
double density_mass_annulus(const MagneticConfig& cfg, double r_lo, double r_hi, int radial_nodes);

/// Exact mass of dtheta dt carried into the annulus r_lo < d < r_hi, i.e.
/// 2 pi times the measure of flow times with phi(t) in that range.
double ring_mass_exact(const MagneticConfig& cfg, double r_lo, double r_hi);

/// Leading constant of alpha * d as d -> 0, sqrt(2/E).
double center_singularity_constant(const MagneticConfig& cfg);
/// Leading constant of alpha * sqrt(R_E - d) as d -> R_E from inside.
double boundary_singularity_constant(const MagneticConfig& cfg);

}  // namespace magflow
