#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "magflow/hyperbolic.hpp"
#include "magflow/magnetic_flow.hpp"

namespace magflow::testing {

inline constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>{lo, hi}(rng); }

// rot(a) * T(s) * rot(b) covers PSL(2,R) as (a, s, b) range over their domains.
inline Moebius random_moebius(Rng& rng, double max_length = 3.0) {
  return Moebius::rotation_about_center(uniform(rng, 0.0, 2.0 * kPi)) *
         Moebius::translation_imaginary_axis(uniform(rng, 0.0, max_length)) *
         Moebius::rotation_about_center(uniform(rng, 0.0, 2.0 * kPi));
}

inline HPoint random_point(Rng& rng) { return HPoint{uniform(rng, -3.0, 3.0), uniform(rng, 0.2, 4.0)}; }

inline HTangent random_tangent(Rng& rng, double speed) {
  const HPoint z = random_point(rng);
  return HTangent{z, std::polar(speed * z.y(), uniform(rng, 0.0, 2.0 * kPi))};
}

inline MagneticConfig random_subcritical(Rng& rng) {
  const double b = uniform(rng, 0.5, 3.0);
  return MagneticConfig{b, uniform(rng, 0.02, 0.98) * 0.5 * b * b};
}

}  // namespace magflow::testing
