#pragma once

#include <complex>

namespace magflow {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// Point of the upper half-plane. Construction rejects Im(z) <= 0.
class HPoint {
 public:
  explicit HPoint(Complex z);
  HPoint(double x, double y) : HPoint(Complex{x, y}) {}

  Complex z() const { return z_; }
  double x() const { return z_.real(); }
  double y() const { return z_.imag(); }

  static HPoint center() { return HPoint{kI}; }

 private:
  Complex z_;
};

/// Tangent vector v at a base point, in half-plane coordinates.
struct HTangent {
  HPoint base;
  Complex v;

  /// Hyperbolic norm |v| / Im(z).
  double speed() const { return std::abs(v) / base.y(); }
};

/// Element of PSL(2,R) stored as a unimodular real matrix [[a, b], [c, d]].
///
/// Every factory renormalizes by 1/sqrt(det) and picks the sign with a > 0
/// (or a == 0 and b > 0).
class Moebius {
 public:
  Moebius() = default;

  /// Renormalizes to det = 1; throws std::invalid_argument if det <= 0.
  static Moebius from_entries(double a, double b, double c, double d);
  static Moebius identity() { return Moebius{}; }

  /// Rotation about i by `angle`; acts on T_i H by multiplication with e^{i angle}.
  static Moebius rotation_about_center(double angle);
  /// Hyperbolic translation by `length` along the imaginary axis, i -> e^{length} i.
  static Moebius translation_imaginary_axis(double length);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double d() const { return d_; }

  double det() const { return a_ * d_ - b_ * c_; }
  double trace() const { return a_ + d_; }
  Moebius inverse() const;

  Complex apply(Complex z) const { return (a_ * z + b_) / (c_ * z + d_); }
  /// Derivative of the Moebius map at z, i.e. 1/(cz+d)^2.
  Complex derivative(Complex z) const {
    const Complex den = c_ * z + d_;
    return 1.0 / (den * den);
  }

  bool equals_up_to_sign(const Moebius& other, double tol = 1e-9) const;
  /// Max-norm distance to the identity, modulo sign.
  double distance_to_identity() const;

  friend Moebius operator*(const Moebius& lhs, const Moebius& rhs);

 private:
  Moebius(double a, double b, double c, double d) : a_(a), b_(b), c_(c), d_(d) {}

  double a_ = 1.0;
  double b_ = 0.0;
  double c_ = 0.0;
  double d_ = 1.0;
};

HPoint mobius_apply(const Moebius& g, const HPoint& p);
HTangent mobius_apply(const Moebius& g, const HTangent& p);

/// Hyperbolic distance, evaluated as 2 asinh(|z-w| / (2 sqrt(Im z Im w))),
/// the same quantity as arccosh(1 + |z-w|^2 / (2 Im z Im w)).
double hyp_dist(const HPoint& z, const HPoint& w);

/// Rotates the tangent vector by `angle` in the conformal structure.
HTangent rotate_fiber(const HTangent& p, double angle);

/// The g with g.(i, i) = p, for p of unit hyperbolic norm (tolerance 1e-10).
/// Throws std::invalid_argument("non-unit tangent") otherwise.
Moebius frame_of(const HTangent& p);

/// The unit tangent (g.i, dg_i(i)) represented by a group element.
HTangent orbit_frame(const Moebius& g);

/// Cayley map to the Poincare disk, sending i to 0.
Complex to_disk(const HPoint& p);
HPoint from_disk(Complex w);

}  // namespace magflow
