#include "magflow/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace magflow {

HPoint::HPoint(Complex z) : z_(z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("point not in the upper half-plane");
  }
}

Moebius Moebius::from_entries(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (!(det > 0.0)) {
    throw std::invalid_argument("Moebius element requires positive determinant");
  }
  const double s = 1.0 / std::sqrt(det);
  a *= s;
  b *= s;
  c *= s;
  d *= s;
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
  return Moebius{a, b, c, d};
}

Moebius Moebius::rotation_about_center(double angle) {
  // [[cos, sin], [-sin, cos]] at half angle has derivative e^{i angle} at i.
  const double h = 0.5 * angle;
  return from_entries(std::cos(h), std::sin(h), -std::sin(h), std::cos(h));
}

Moebius Moebius::translation_imaginary_axis(double length) {
  const double h = 0.5 * length;
  return from_entries(std::exp(h), 0.0, 0.0, std::exp(-h));
}

Moebius Moebius::inverse() const { return from_entries(d_, -b_, -c_, a_); }

Moebius operator*(const Moebius& lhs, const Moebius& rhs) {
  return Moebius::from_entries(lhs.a_ * rhs.a_ + lhs.b_ * rhs.c_,
                               lhs.a_ * rhs.b_ + lhs.b_ * rhs.d_,
                               lhs.c_ * rhs.a_ + lhs.d_ * rhs.c_,
                               lhs.c_ * rhs.b_ + lhs.d_ * rhs.d_);
}

bool Moebius::equals_up_to_sign(const Moebius& other, double tol) const {
  auto close = [tol](const Moebius& p, double sign, const Moebius& q) {
    return std::abs(p.a_ - sign * q.a_) <= tol && std::abs(p.b_ - sign * q.b_) <= tol &&
           std::abs(p.c_ - sign * q.c_) <= tol && std::abs(p.d_ - sign * q.d_) <= tol;
  };
  return close(*this, 1.0, other) || close(*this, -1.0, other);
}

double Moebius::distance_to_identity() const {
  auto dist = [this](double s) {
    return std::max({std::abs(a_ - s), std::abs(b_), std::abs(c_), std::abs(d_ - s)});
  };
  return std::min(dist(1.0), dist(-1.0));
}

HPoint mobius_apply(const Moebius& g, const HPoint& p) {
  const Complex w = g.apply(p.z());
  // Rounding can only push Im below zero for points already at underflow scale.
  return HPoint{Complex{w.real(), std::max(w.imag(), std::numeric_limits<double>::min())}};
}

HTangent mobius_apply(const Moebius& g, const HTangent& p) {
  return HTangent{mobius_apply(g, p.base), p.v * g.derivative(p.base.z())};
}

double hyp_dist(const HPoint& z, const HPoint& w) {
  const double chord = std::abs(z.z() - w.z());
  return 2.0 * std::asinh(chord / (2.0 * std::sqrt(z.y() * w.y())));
}

HTangent rotate_fiber(const HTangent& p, double angle) {
  return HTangent{p.base, p.v * std::polar(1.0, angle)};
}

Moebius frame_of(const HTangent& p) {
  const double y = p.base.y();
  if (std::abs(p.speed() - 1.0) > 1e-10) {
    throw std::invalid_argument("non-unit tangent");
  }
  // Affine part (z -> y z + x) carries (i, i) to (z, y i); the remaining
  // rotation about i turns y i into v.
  const double sy = std::sqrt(y);
  const Moebius affine = Moebius::from_entries(sy, p.base.x() / sy, 0.0, 1.0 / sy);
  const double angle = std::arg(p.v / (kI * y));
  return affine * Moebius::rotation_about_center(angle);
}

HTangent orbit_frame(const Moebius& g) {
  return mobius_apply(g, HTangent{HPoint::center(), kI});
}

Complex to_disk(const HPoint& p) { return (p.z() - kI) / (p.z() + kI); }

HPoint from_disk(Complex w) {
  if (!(std::abs(w) < 1.0)) {
    throw std::invalid_argument("point not in the open unit disk");
  }
  return HPoint{kI * (1.0 + w) / (1.0 - w)};
}

}  // namespace magflow
