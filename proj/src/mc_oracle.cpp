#include "magflow/mc_oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "magflow/parallel.hpp"
#include "magflow/philox.hpp"
#include "magflow/zonal_torus.hpp"

namespace magflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinSamples = 10000;
constexpr double kDiskSlack = 1e-9;
// Rings used by the singularity fits: the innermost eight, and the
// second through tenth counted from the caustic.
constexpr std::size_t kCenterFitRings = 8;
constexpr std::size_t kBoundaryFitFirst = 2;
constexpr std::size_t kBoundaryFitLast = 10;

PushforwardHistogram empty_histogram(const MagneticConfig& cfg, std::size_t n, std::uint64_t seed,
                                     std::size_t rings) {
  if (rings < 16) throw std::invalid_argument("need at least 16 rings");
  PushforwardHistogram h;
  h.field = cfg.field();
  h.energy = cfg.energy();
  h.seed = seed;
  h.samples = n;
  h.torus_period = period(cfg);
  const double r = radius(cfg);
  h.edges.resize(rings + 1);
  for (std::size_t i = 0; i <= rings; ++i) h.edges[i] = r * static_cast<double>(i) / static_cast<double>(rings);
  h.counts.assign(rings, 0);
  return h;
}

std::size_t ring_index(double d, double r, std::size_t rings) {
  if (d > r + kDiskSlack) throw std::logic_error("sample outside the projected disk");
  const auto idx = static_cast<std::size_t>(d / r * static_cast<double>(rings));
  return std::min(idx, rings - 1);
}

// Accumulates per-worker partial histograms of bin(j) for j in [0, n).
template <typename BinOf>
void fill(PushforwardHistogram& h, std::size_t n, BinOf&& bin_of) {
  std::vector<std::vector<std::uint64_t>> partial(worker_count(), std::vector<std::uint64_t>(h.rings(), 0));
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, std::size_t worker) {
    std::vector<std::uint64_t>& local = partial[worker];
    for (std::size_t j = begin; j < end; ++j) ++local[bin_of(j)];
  });
  for (const auto& local : partial) {
    for (std::size_t i = 0; i < h.rings(); ++i) h.counts[i] += local[i];
  }
}

}  // namespace

double PushforwardHistogram::ring_area(std::size_t i) const {
  return kTwoPi * (std::cosh(edges[i + 1]) - std::cosh(edges[i]));
}

double PushforwardHistogram::estimated_density(std::size_t i) const {
  return static_cast<double>(counts[i]) / (static_cast<double>(samples) * ring_area(i)) * kTwoPi * torus_period;
}

PushforwardHistogram sample_pushforward(const MagneticConfig& cfg, std::size_t n, std::uint64_t seed,
                                        std::size_t rings) {
  if (n < kMinSamples) throw std::invalid_argument("need at least 1e4 samples");
  PushforwardHistogram h = empty_histogram(cfg, n, seed, rings);
  const Philox4x32 rng{seed};
  const double r = h.edges.back();
  const HPoint center = HPoint::center();
  fill(h, n, [&](std::size_t j) {
    const auto [u_theta, u_t] = rng.uniform_pair(j);
    const HPoint y = psi(cfg, kTwoPi * u_theta, h.torus_period * u_t);
    return ring_index(hyp_dist(center, y), r, rings);
  });
  return h;
}

PushforwardHistogram sample_inverse_cdf(const MagneticConfig& cfg, std::size_t n, std::size_t rings) {
  if (n < kMinSamples) throw std::invalid_argument("need at least 1e4 samples");
  PushforwardHistogram h = empty_histogram(cfg, n, 0, rings);
  const double r = h.edges.back();
  const double g = cfg.gamma();
  const double ratio = cfg.speed() / g;
  fill(h, n, [&](std::size_t j) {
    const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    const double t = 0.5 * h.torus_period * u;
    const double d = 2.0 * std::asinh(ratio * std::sin(0.5 * g * t));
    return ring_index(d, r, rings);
  });
  return h;
}

double exact_ring_average(const MagneticConfig& cfg, double r_lo, double r_hi) {
  return ring_mass_exact(cfg, r_lo, r_hi) / (kTwoPi * (std::cosh(r_hi) - std::cosh(r_lo)));
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs >= 2 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ComparisonReport compare_to_closed_form(const PushforwardHistogram& hist, const MagneticConfig& cfg) {
  if (hist.field != cfg.field() || hist.energy != cfg.energy()) {
    throw std::invalid_argument("mismatched cfg");
  }
  ComparisonReport report;
  const double r = hist.edges.back();
  const double total = kTwoPi * hist.torus_period;
  const std::size_t rings = hist.rings();
  for (std::size_t i = 0; i < rings; ++i) {
    const double lo = hist.edges[i];
    const double hi = hist.edges[i + 1];
    const double est = hist.estimated_density(i);
    const double exact = exact_ring_average(cfg, lo, hi);
    const double rel = exact > 0.0 ? std::abs(est - exact) / exact : 0.0;
    report.rings.push_back({lo, hi, hist.counts[i], est, exact, rel});

    const double expected = static_cast<double>(hist.samples) * ring_mass_exact(cfg, lo, hi) / total;
    if (expected > 0.0) {
      const double diff = static_cast<double>(hist.counts[i]) - expected;
      report.chi_square += diff * diff / expected;
      ++report.degrees_of_freedom;
    }
    if (lo >= 0.1 * r && hi <= 0.9 * r) report.max_interior_rel_err = std::max(report.max_interior_rel_err, rel);
    if (i > 0 && i + 1 < rings) report.max_regular_rel_err = std::max(report.max_regular_rel_err, rel);
  }
  if (report.degrees_of_freedom > 0) --report.degrees_of_freedom;

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < kCenterFitRings; ++i) {
    const RingComparison& ring = report.rings[i];
    if (ring.count == 0) continue;
    lx.push_back(std::log(0.5 * (ring.r_lo + ring.r_hi)));
    ly.push_back(std::log(ring.estimated));
  }
  report.center_slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : std::nan("");

  lx.clear();
  ly.clear();
  for (std::size_t k = kBoundaryFitFirst; k <= kBoundaryFitLast; ++k) {
    const RingComparison& ring = report.rings[rings - k];
    if (ring.count == 0) continue;
    lx.push_back(std::log(r - 0.5 * (ring.r_lo + ring.r_hi)));
    ly.push_back(std::log(ring.estimated));
  }
  report.boundary_slope = lx.size() >= 2 ? least_squares_slope(lx, ly) : std::nan("");
  return report;
}

}  // namespace magflow
