#include "magflow/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <boost/math/quadrature/gauss.hpp>

namespace magflow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr int kReductionLimit = 100000;
constexpr double kDescentTolerance = 1e-12;
constexpr double kEnumerationCap = 6.0;
constexpr std::size_t kBirkhoffSteps = 100000;

using Rule = boost::math::quadrature::gauss<double, 16>;

HPoint point_at(double angle, double r) {
  return from_disk(std::polar(std::tanh(0.5 * r), angle));
}

template <typename F>
double composite_gauss(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += Rule::integrate(f, a + p * h, a + (p + 1) * h);
  }
  return sum;
}

// Disk angles of the vertices in increasing order, closed by the first + 2 pi.
std::vector<double> vertex_angles(const FuchsianGroup& group) {
  std::vector<double> angles;
  for (const HPoint& v : group.vertices) {
    double a = std::arg(to_disk(v));
    if (a < 0.0) a += kTwoPi;
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  angles.push_back(angles.front() + kTwoPi);
  return angles;
}

// Polar integral over the domain of f(point) sinh(r) dr dangle.
template <typename F>
double integrate_over_domain(const FuchsianGroup& group, F&& f, int angular_panels, int radial_panels) {
  const std::vector<double> angles = vertex_angles(group);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < angles.size(); ++s) {
    auto along_ray = [&](double angle) {
      const double r_max = boundary_distance(group, angle);
      auto radial = [&](double r) { return f(point_at(angle, r)) * std::sinh(r); };
      return composite_gauss(radial, 0.0, r_max, radial_panels);
    };
    total += composite_gauss(along_ray, angles[s], angles[s + 1], angular_panels);
  }
  return total;
}

std::pair<long long, long long> orbit_key(const Moebius& g) {
  const Complex z = g.apply(kI);
  return {std::llround(z.real() / z.imag() * 1e6), std::llround(std::log(z.imag()) * 1e6)};
}

}  // namespace

Moebius FuchsianGroup::relation_product() const {
  Moebius product = Moebius::identity();
  for (int k : relation) product = product * generators.at(static_cast<std::size_t>(k));
  return product;
}

double FuchsianGroup::relation_residual() const { return relation_product().distance_to_identity(); }

FuchsianGroup bolza_group() {
  constexpr int kSides = 8;
  FuchsianGroup group;
  group.genus = 2;
  // Regular octagon with interior angle pi/4:
  //   cosh(inradius) = cot(pi/8),  cosh(circumradius) = cot(pi/8)^2.
  const double cot = 1.0 / std::tan(kPi / kSides);
  group.inradius = std::acosh(cot);
  group.circumradius = std::acosh(cot * cot);

  // Side k has its midpoint at disk angle k pi/4; g_k carries the opposite
  // side onto it, translating i by twice the inradius in that direction.
  const Moebius shift = Moebius::translation_imaginary_axis(2.0 * group.inradius);
  for (int k = 0; k < kSides; ++k) {
    const double angle = k * kTwoPi / kSides;
    group.generators.push_back(Moebius::rotation_about_center(angle) * shift *
                               Moebius::rotation_about_center(-angle));
    group.vertices.push_back(point_at(angle + kPi / kSides, group.circumradius));
  }
  // g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 with g_{k+4} = g_k^-1.
  group.relation = {0, 5, 2, 7, 4, 1, 6, 3};
  return group;
}

void require_chern_integral(const FuchsianGroup& group, double field) {
  const double chern = 2.0 * field * (group.genus - 1);
  if (std::abs(chern - std::round(chern)) > 1e-9) {
    throw std::invalid_argument("field violates Chern integrality 2B(g-1) in Z");
  }
}

bool in_fundamental_domain(const FuchsianGroup& group, const HPoint& z, double tol) {
  const HPoint center = HPoint::center();
  const double d0 = hyp_dist(z, center);
  for (const Moebius& g : group.generators) {
    if (hyp_dist(mobius_apply(g, z), center) < d0 - tol) return false;
  }
  return true;
}

double boundary_distance(const FuchsianGroup& group, double angle) {
  double lo = 0.0;
  double hi = group.circumradius + 0.5;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (in_fundamental_domain(group, point_at(angle, mid), 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fundamental_domain_area(const FuchsianGroup& group) {
  const std::vector<double> angles = vertex_angles(group);
  double area = 0.0;
  for (std::size_t s = 0; s + 1 < angles.size(); ++s) {
    auto sector = [&](double a) { return std::cosh(boundary_distance(group, a)) - 1.0; };
    area += composite_gauss(sector, angles[s], angles[s + 1], 4);
  }
  return area;
}

DomainReduction reduce(const FuchsianGroup& group, const HPoint& z) {
  const HPoint center = HPoint::center();
  DomainReduction out{z, {}, Moebius::identity()};
  double dist = hyp_dist(z, center);
  for (int step = 0; step < kReductionLimit; ++step) {
    int best = -1;
    double best_dist = dist - kDescentTolerance;
    HPoint best_point = out.representative;
    for (std::size_t k = 0; k < group.generators.size(); ++k) {
      const HPoint moved = mobius_apply(group.generators[k], out.representative);
      const double d = hyp_dist(moved, center);
      if (d < best_dist) {
        best = static_cast<int>(k);
        best_dist = d;
        best_point = moved;
      }
    }
    if (best < 0) return out;
    out.representative = best_point;
    out.word.push_back(best);
    out.element = group.generators[static_cast<std::size_t>(best)] * out.element;
    dist = best_dist;
  }
  throw std::runtime_error("reduction failed");
}

std::vector<Moebius> translates_meeting_disk(const FuchsianGroup& group, double radius) {
  if (radius >= kEnumerationCap) {
    throw std::domain_error("disk too large for exact enumeration");
  }
  const HPoint center = HPoint::center();
  const double reach = std::max(radius, 0.0) + group.circumradius;
  std::vector<Moebius> found{Moebius::identity()};
  std::map<std::pair<long long, long long>, std::size_t> seen{{orbit_key(found.front()), 0}};
  std::deque<Moebius> frontier{found.front()};
  while (!frontier.empty()) {
    const Moebius g = frontier.front();
    frontier.pop_front();
    for (const Moebius& s : group.generators) {
      // Neighbouring tile across side s of the tile g.D.
      const Moebius h = g * s;
      if (hyp_dist(mobius_apply(h, center), center) > reach) continue;
      if (!seen.emplace(orbit_key(h), found.size()).second) continue;
      found.push_back(h);
      frontier.push_back(h);
    }
  }
  return found;
}

DensitySample density_surface(const FuchsianGroup& group, const MagneticConfig& cfg, const HPoint& y,
                              const std::vector<Moebius>& translates, BandWidths bands) {
  require_chern_integral(group, cfg.field());
  if (!in_fundamental_domain(group, y)) {
    throw std::invalid_argument("point not reduced to the fundamental domain");
  }
  const HPoint center = HPoint::center();
  const double r = radius(cfg);
  const double full_period = period(cfg);
  DensitySample out{y, std::numeric_limits<double>::infinity(), 0.0, 0.0, {}, DensityFlag::Outside};
  bool near_center = false;
  bool near_boundary = false;
  for (const Moebius& g : translates) {
    const HPoint lift = mobius_apply(g, y);
    const double d = hyp_dist(center, lift);
    out.distance_to_center = std::min(out.distance_to_center, d);
    if (d > r * (1.0 + 1e-9)) continue;
    const DensitySample cover = density_cover(cfg, lift, bands);
    if (cover.preimages.empty()) continue;
    out.alpha_raw += cover.alpha_raw;
    out.preimages.insert(out.preimages.end(), cover.preimages.begin(), cover.preimages.end());
    near_center = near_center || cover.flag == DensityFlag::NearCenter;
    near_boundary = near_boundary || cover.flag == DensityFlag::NearBoundary;
  }
  out.alpha_normalized = out.alpha_raw / (kTwoPi * full_period);
  if (out.preimages.empty()) {
    out.flag = DensityFlag::Outside;
  } else if (near_center) {
    out.flag = DensityFlag::NearCenter;
  } else if (near_boundary) {
    out.flag = DensityFlag::NearBoundary;
  } else {
    out.flag = DensityFlag::Regular;
  }
  return out;
}

DensitySample density_surface(const FuchsianGroup& group, const MagneticConfig& cfg, const HPoint& y,
                              BandWidths bands) {
  return density_surface(group, cfg, y, translates_meeting_disk(group, radius(cfg)), bands);
}

double surface_density_mass(const FuchsianGroup& group, const MagneticConfig& cfg, std::size_t samples) {
  require_chern_integral(group, cfg.field());
  const HPoint center = HPoint::center();
  const double r = radius(cfg);
  const std::vector<Moebius> translates = translates_meeting_disk(group, r);
  const double cosh_max = std::cosh(group.circumradius);
  // R2 sequence: additive recurrence with the plastic-number based shifts.
  const double plastic = 1.32471795724474602596;
  const double a1 = 1.0 / plastic;
  const double a2 = 1.0 / (plastic * plastic);
  double sum = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double u = std::fmod(0.5 + a1 * static_cast<double>(n + 1), 1.0);
    const double v = std::fmod(0.5 + a2 * static_cast<double>(n + 1), 1.0);
    // Uniform in (angle, cosh r) is uniform for hyperbolic area.
    const HPoint y = point_at(kTwoPi * u, std::acosh(1.0 + v * (cosh_max - 1.0)));
    if (!in_fundamental_domain(group, y, 0.0)) continue;
    for (const Moebius& g : translates) {
      const double d = hyp_dist(center, mobius_apply(g, y));
      if (d < r && d > 0.0) sum += alpha_raw_at_distance(cfg, d);
    }
  }
  const double disk_area = kTwoPi * (cosh_max - 1.0);
  return disk_area * sum / static_cast<double>(samples);
}

GridObservable::GridObservable(double x_min, double x_max, double y_min, double y_max, std::size_t nx,
                               std::size_t ny, std::vector<double> values, std::vector<bool> inside)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), nx_(nx), ny_(ny),
      values_(std::move(values)), inside_(std::move(inside)) {
  if (nx_ < 2 || ny_ < 2 || !(x_max_ > x_min_) || !(y_max_ > y_min_)) {
    throw std::invalid_argument("observable grid needs at least 2x2 nodes on a nonempty box");
  }
  if (values_.size() != nx_ * ny_ || inside_.size() != nx_ * ny_) {
    throw std::invalid_argument("observable grid size mismatch");
  }
}

double GridObservable::node_x(std::size_t ix) const {
  return x_min_ + (x_max_ - x_min_) * static_cast<double>(ix) / static_cast<double>(nx_ - 1);
}

double GridObservable::node_y(std::size_t iy) const {
  return y_min_ + (y_max_ - y_min_) * static_cast<double>(iy) / static_cast<double>(ny_ - 1);
}

double GridObservable::operator()(const HPoint& p) const {
  const double fx = (p.x() - x_min_) / (x_max_ - x_min_) * static_cast<double>(nx_ - 1);
  const double fy = (p.y() - y_min_) / (y_max_ - y_min_) * static_cast<double>(ny_ - 1);
  if (fx < 0.0 || fy < 0.0 || fx > static_cast<double>(nx_ - 1) || fy > static_cast<double>(ny_ - 1)) {
    return 0.0;
  }
  const auto ix = std::min(static_cast<std::size_t>(fx), nx_ - 2);
  const auto iy = std::min(static_cast<std::size_t>(fy), ny_ - 2);
  const double tx = fx - static_cast<double>(ix);
  const double ty = fy - static_cast<double>(iy);
  auto masked = [this](std::size_t i, std::size_t j) { return inside(i, j) ? value(i, j) : 0.0; };
  return (1.0 - tx) * (1.0 - ty) * masked(ix, iy) + tx * (1.0 - ty) * masked(ix + 1, iy) +
         (1.0 - tx) * ty * masked(ix, iy + 1) + tx * ty * masked(ix + 1, iy + 1);
}

Box domain_bounding_box(const FuchsianGroup& group) {
  Box box{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  constexpr int kRays = 4096;
  for (int k = 0; k < kRays; ++k) {
    const double angle = kTwoPi * k / kRays;
    const HPoint p = point_at(angle, boundary_distance(group, angle));
    box.x_min = std::min(box.x_min, p.x());
    box.x_max = std::max(box.x_max, p.x());
    box.y_min = std::min(box.y_min, p.y());
    box.y_max = std::max(box.y_max, p.y());
  }
  return box;
}

GridObservable bump_observable(const FuchsianGroup& group, const HPoint& center, double width, std::size_t n) {
  const Box box = domain_bounding_box(group);
  std::vector<double> values(n * n);
  std::vector<bool> inside(n * n);
  for (std::size_t iy = 0; iy < n; ++iy) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double x = box.x_min + (box.x_max - box.x_min) * static_cast<double>(ix) / static_cast<double>(n - 1);
      const double y = box.y_min + (box.y_max - box.y_min) * static_cast<double>(iy) / static_cast<double>(n - 1);
      const HPoint p{x, y};
      const double s = hyp_dist(p, center) / width;
      values[iy * n + ix] = s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
      inside[iy * n + ix] = in_fundamental_domain(group, p);
    }
  }
  return GridObservable{box.x_min, box.x_max, box.y_min, box.y_max, n, n, std::move(values), std::move(inside)};
}

double area_average(const FuchsianGroup& group, const GridObservable& f) {
  const double integral = integrate_over_domain(group, f, 8, 16);
  const double area = integrate_over_domain(group, [](const HPoint&) { return 1.0; }, 8, 16);
  return integral / area;
}

double birkhoff_average(const FuchsianGroup& group, const MagneticConfig& cfg, const GridObservable& f,
                        double horizon, const HTangent& p0) {
  if (std::abs(cfg.energy() - cfg.critical_energy()) > 1e-9) {
    throw std::domain_error("equidistribution test requires critical energy");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("averaging horizon must be positive");
  require_chern_integral(group, cfg.field());
  const double h = horizon / static_cast<double>(kBirkhoffSteps);
  // Neumaier-compensated trapezoid sum; the weights add up to kBirkhoffSteps.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t j = 0; j <= kBirkhoffSteps; ++j) {
    const double t = h * static_cast<double>(j);
    const HTangent moved = flow_exact(cfg, p0, t);
    const double value = f(reduce(group, moved.base).representative);
    const double term = (j == 0 || j == kBirkhoffSteps) ? 0.5 * value : value;
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return (sum + carry) / static_cast<double>(kBirkhoffSteps);
}

}  // namespace magflow
