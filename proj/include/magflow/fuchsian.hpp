#pragma once

#include <cstddef>
#include <vector>

#include "magflow/hyperbolic.hpp"
#include "magflow/magnetic_flow.hpp"
#include "magflow/zonal_torus.hpp"

namespace magflow {

/// Cocompact Fuchsian group given by the side pairings of a Dirichlet
/// domain centered at i.
struct FuchsianGroup {
  /// Side pairings; index k + n/2 holds the inverse of index k.
  std::vector<Moebius> generators;
  /// Defining relation as a sequence of generator indices, applied left to right.
  std::vector<int> relation;
  int genus = 0;
  /// Distance from i to the side midpoints.
  double inradius = 0.0;
  /// Distance from i to the vertices.
  double circumradius = 0.0;
  std::vector<HPoint> vertices;

  Moebius relation_product() const;
  double relation_residual() const;
};

/// Bolza surface: regular octagon with vertex angle 2 pi / 8 centered at i,
/// opposite sides paired by rotation conjugates of one hyperbolic translation.
FuchsianGroup bolza_group();

/// Chern integrality 2B(g-1) in Z; throws std::invalid_argument otherwise.
void require_chern_integral(const FuchsianGroup& group, double field);

bool in_fundamental_domain(const FuchsianGroup& group, const HPoint& z, double tol = 1e-9);

/// Distance from i to the domain boundary along the ray leaving i at disk angle `angle`.
double boundary_distance(const FuchsianGroup& group, double angle);

/// Hyperbolic area of the fundamental domain by quadrature in polar coordinates.
double fundamental_domain_area(const FuchsianGroup& group);

struct DomainReduction {
  HPoint representative;
  /// Generator indices in the order they were applied.
  std::vector<int> word;
  /// The product h with representative = h . input.
  Moebius element;
};

/// Greedy distance descent toward i; throws std::runtime_error("reduction failed")
/// after 1e5 steps.
DomainReduction reduce(const FuchsianGroup& group, const HPoint& z);

/// Group elements whose translate of the domain can meet the disk of radius R
/// about i, i.e. d(i, g.i) <= R + circumradius. Identity first, then BFS order.
/// Throws std::domain_error for R >= 6.
std::vector<Moebius> translates_meeting_disk(const FuchsianGroup& group, double radius);

/// Density of the projected torus on the surface: the cover density summed
/// over every lift g.y. `translates` must come from translates_meeting_disk(R_E).
DensitySample density_surface(const FuchsianGroup& group, const MagneticConfig& cfg, const HPoint& y,
                              const std::vector<Moebius>& translates, BandWidths bands = {});
DensitySample density_surface(const FuchsianGroup& group, const MagneticConfig& cfg, const HPoint& y,
                              BandWidths bands = {});

/// Integral of the surface density over the fundamental domain by a Kronecker
/// (R2) point set of `samples` points, uniform for hyperbolic area.
double surface_density_mass(const FuchsianGroup& group, const MagneticConfig& cfg, std::size_t samples);

/// Bilinearly interpolated samples on a grid over a half-plane box, with a
/// mask marking nodes inside the fundamental domain. Zero outside the box.
class GridObservable {
 public:
  GridObservable(double x_min, double x_max, double y_min, double y_max, std::size_t nx, std::size_t ny,
                 std::vector<double> values, std::vector<bool> inside);

  double operator()(const HPoint& p) const;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double value(std::size_t ix, std::size_t iy) const { return values_[iy * nx_ + ix]; }
  bool inside(std::size_t ix, std::size_t iy) const { return inside_[iy * nx_ + ix]; }
  double node_x(std::size_t ix) const;
  double node_y(std::size_t iy) const;

 private:
  double x_min_, x_max_, y_min_, y_max_;
  std::size_t nx_, ny_;
  std::vector<double> values_;
  std::vector<bool> inside_;
};

struct Box {
  double x_min, x_max, y_min, y_max;
};

/// Half-plane bounding box of the fundamental domain.
Box domain_bounding_box(const FuchsianGroup& group);

/// Smooth compactly supported bump (1 - (d/width)^2)^2 about `center`,
/// sampled on an n x n grid over the domain's bounding box.
GridObservable bump_observable(const FuchsianGroup& group, const HPoint& center, double width, std::size_t n);

/// Area average of the observable over the fundamental domain.
double area_average(const FuchsianGroup& group, const GridObservable& f);

/// Time average of f(reduce(flow_exact(p0, t))) over [0, T] by the composite
/// trapezoid rule with step T / 1e5. Requires E = E_c within 1e-9.
double birkhoff_average(const FuchsianGroup& group, const MagneticConfig& cfg, const GridObservable& f,
                        double horizon, const HTangent& p0);

}  // namespace magflow
