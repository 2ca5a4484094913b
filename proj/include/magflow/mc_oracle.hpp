#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "magflow/magnetic_flow.hpp"

namespace magflow {

/// Histogram of d(i, Psi(theta, t)) over geodesic rings about the center.
struct PushforwardHistogram {
  double field = 0.0;
  double energy = 0.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double torus_period = 0.0;
  /// Ring edges in hyperbolic distance, edges.front() = 0, edges.back() = R_E.
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;

  std::size_t rings() const { return counts.size(); }
  /// 2 pi (cosh r_hi - cosh r_lo).
  double ring_area(std::size_t i) const;
  /// count / (n * area) * 2 pi T_E, in the units of alpha_raw.
  double estimated_density(std::size_t i) const;
};

inline constexpr std::size_t kDefaultRings = 256;

/// Uniform (theta, t) from a seeded Philox4x32-10 stream, sample j drawn from
/// counter j. Throws std::invalid_argument for n < 1e4 and std::domain_error
/// outside 0 < E < E_c. Bit-exact for fixed (cfg, n, seed), any worker count.
PushforwardHistogram sample_pushforward(const MagneticConfig& cfg, std::size_t n, std::uint64_t seed,
                                        std::size_t rings = kDefaultRings);

/// Deterministic analytic path: stratified u_j = (j + 1/2)/n pushed through the
/// inverse of the radial distribution function, r = phi(u T_E / 2).
PushforwardHistogram sample_inverse_cdf(const MagneticConfig& cfg, std::size_t n,
                                        std::size_t rings = kDefaultRings);

struct RingComparison {
  double r_lo, r_hi;
  std::uint64_t count;
  double estimated;
  double exact;
  double rel_err;
};

struct ComparisonReport {
  std::vector<RingComparison> rings;
  double chi_square = 0.0;
  std::size_t degrees_of_freedom = 0;
  /// Max relative error over rings inside [0.1, 0.9] R_E.
  double max_interior_rel_err = 0.0;
  /// Max relative error over rings off the singular bands (first and last ring excluded).
  double max_regular_rel_err = 0.0;
  /// log-log slope of the histogram density against d near the center.
  double center_slope = 0.0;
  /// log-log slope against R_E - d just inside the caustic.
  double boundary_slope = 0.0;
};

/// Throws std::invalid_argument("mismatched cfg") if hist was built for another (B, E).
ComparisonReport compare_to_closed_form(const PushforwardHistogram& hist, const MagneticConfig& cfg);

/// Exact ring average of alpha_raw (ring mass / ring area).
double exact_ring_average(const MagneticConfig& cfg, double r_lo, double r_hi);

/// Ordinary least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace magflow
