#include "magflow/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "magflow/fuchsian.hpp"
#include "magflow/io.hpp"
#include "magflow/mc_oracle.hpp"
#include "magflow/spectrum.hpp"
#include "magflow/zonal_torus.hpp"

namespace magflow::verify {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

using Json = nlohmann::json;
using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>{lo, hi}(rng); }

// Random (B, E) with E a fraction of the critical energy in [f_lo, f_hi).
MagneticConfig random_config(Rng& rng, double b_lo, double b_hi, double f_lo, double f_hi) {
  const double b = uniform(rng, b_lo, b_hi);
  return MagneticConfig{b, uniform(rng, f_lo, f_hi) * 0.5 * b * b};
}

HPoint polar_point(double angle, double d) { return from_disk(std::polar(std::tanh(0.5 * d), angle)); }

// Maximizer of a unimodal function on [lo, hi] by golden-section search.
template <typename F>
double golden_max(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

bool periodicity(const Options& opts, Json& m) {
  Rng rng{opts.seed + 1};
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const MagneticConfig cfg = random_config(rng, 0.5, 3.0, 0.02, 0.98);
    const HPoint z{uniform(rng, -2.0, 2.0), uniform(rng, 0.3, 3.0)};
    const HTangent p{z, std::polar(cfg.speed() * z.y(), uniform(rng, 0.0, kTwoPi))};
    const HTangent q = flow_exact(cfg, p, period(cfg));
    const double residual = hyp_dist(p.base, q.base) + std::abs(q.v - p.v) / z.y();
    worst = std::max(worst, residual);
  }
  m["pairs"] = 50;
  m["max_residual"] = worst;
  m["threshold"] = 1e-9;
  return worst < 1e-9;
}

bool footpoint_radius(const Options& opts, Json& m) {
  Rng rng{opts.seed + 2};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const MagneticConfig cfg = random_config(rng, 0.5, 3.0, 0.05, 0.95);
    auto phi = [&](double t) { return phi_profile(cfg, t); };
    const double t_star = golden_max(phi, 0.0, period(cfg));
    worst = std::max(worst, std::abs(phi(t_star) - radius(cfg)));
  }
  m["pairs"] = 20;
  m["max_abs_error"] = worst;
  m["threshold"] = 1e-8;
  return worst < 1e-8;
}

bool profile_derivatives(const Options& opts, Json& m) {
  Rng rng{opts.seed + 3};
  std::vector<MagneticConfig> cfgs{MagneticConfig{1.0, 0.25}};
  for (int i = 0; i < 5; ++i) cfgs.push_back(random_config(rng, 0.5, 3.0, 0.1, 0.9));
  constexpr double h = 1e-5;
  double worst_first = 0.0;
  double worst_second = 0.0;
  for (const MagneticConfig& cfg : cfgs) {
    const double mid = 0.5 * period(cfg);
    const double fp = phi_profile(cfg, mid + h);
    const double f0 = phi_profile(cfg, mid);
    const double fm = phi_profile(cfg, mid - h);
    const double first = (fp - fm) / (2.0 * h);
    const double second = (fp - 2.0 * f0 + fm) / (h * h);
    const double e = cfg.energy();
    const double b = cfg.field();
    const double expected = std::sqrt(2.0 * e) / (2.0 * b) * (2.0 * e - b * b);
    worst_first = std::max(worst_first, std::abs(first));
    worst_second = std::max(worst_second, std::abs(second - expected));
    if (&cfg == &cfgs.front()) {
      m["reference_second_derivative"] = second;
      m["reference_target"] = expected;
    }
  }
  m["max_abs_first_derivative"] = worst_first;
  m["max_abs_second_derivative_error"] = worst_second;
  return worst_first < 1e-6 && worst_second < 1e-4;
}

bool jacobian_identity(const Options& opts, Json& m) {
  Rng rng{opts.seed + 4};
  const MagneticConfig cfg{1.0, 0.25};
  const double period_t = period(cfg);
  constexpr double h = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double theta = uniform(rng, 0.0, kTwoPi);
    double t = uniform(rng, 0.02, 0.48) * period_t;
    if (i % 2 == 1) t = period_t - t;
    const Complex dz_theta = (psi(cfg, theta + h, t).z() - psi(cfg, theta - h, t).z()) / (2.0 * h);
    const Complex dz_t = (psi(cfg, theta, t + h).z() - psi(cfg, theta, t - h).z()) / (2.0 * h);
    const double y = psi(cfg, theta, t).y();
    const double numeric = std::abs(dz_theta.real() * dz_t.imag() - dz_theta.imag() * dz_t.real()) / (y * y);
    const double exact = jacobian(cfg, theta, t);
    worst = std::max(worst, std::abs(numeric - exact) / exact);
  }
  m["points"] = 100;
  m["max_rel_error"] = worst;
  m["threshold"] = 1e-4;
  return worst < 1e-4;
}

bool density_mass_check(const Options& opts, Json& m) {
  Rng rng{opts.seed + 5};
  std::vector<MagneticConfig> cfgs{MagneticConfig{1.0, 0.25}};
  for (int i = 0; i < 3; ++i) cfgs.push_back(random_config(rng, 0.5, 3.0, 0.05, 0.95));
  double worst = 0.0;
  for (const MagneticConfig& cfg : cfgs) {
    const double target = kTwoPi * period(cfg);
    const double mass = density_mass(cfg, 256);
    worst = std::max(worst, std::abs(mass - target) / target);
    if (&cfg == &cfgs.front()) {
      m["reference_mass"] = mass;
      m["reference_target"] = target;
      m["reference_normalized_mass"] = mass / target;
    }
  }
  m["max_rel_error"] = worst;
  m["threshold"] = 0.01;
  return worst < 0.01;
}

bool singularity_exponents(const Options&, Json& m) {
  const MagneticConfig cfg{1.0, 0.25};
  const double r = radius(cfg);
  const HPoint center = HPoint::center();
  constexpr double angle = 0.7;

  std::vector<double> lx, ly;
  double center_product = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const HPoint y = polar_point(angle, std::pow(10.0, -3.0 - 0.25 * k));
    const double d = hyp_dist(center, y);
    const double alpha = density_cover(cfg, y).alpha_raw;
    lx.push_back(std::log(d));
    ly.push_back(std::log(alpha));
    if (k == 12) center_product = alpha * d;
  }
  const double center_slope = least_squares_slope(lx, ly);

  lx.clear();
  ly.clear();
  double boundary_product = 0.0;
  for (int k = 0; k <= 12; ++k) {
    const HPoint y = polar_point(angle, r - std::pow(10.0, -4.0 - 0.25 * k));
    const double tau = r - hyp_dist(center, y);
    const double alpha = density_cover(cfg, y).alpha_raw;
    lx.push_back(std::log(tau));
    ly.push_back(std::log(alpha));
    if (k == 12) boundary_product = alpha * std::sqrt(tau);
  }
  const double boundary_slope = least_squares_slope(lx, ly);

  const double center_const = center_singularity_constant(cfg);
  const double boundary_const = boundary_singularity_constant(cfg);
  const double center_rel = std::abs(center_product - center_const) / center_const;
  const double boundary_rel = std::abs(boundary_product - boundary_const) / boundary_const;
  m["center_slope"] = center_slope;
  m["boundary_slope"] = boundary_slope;
  m["center_alpha_times_d"] = center_product;
  m["center_constant"] = center_const;
  m["boundary_alpha_times_sqrt_tau"] = boundary_product;
  m["boundary_constant"] = boundary_const;
  return std::abs(center_slope + 1.0) <= 0.05 && std::abs(boundary_slope + 0.5) <= 0.05 && center_rel < 0.01 &&
         boundary_rel < 0.02;
}

bool monte_carlo(const Options& opts, Json& m) {
  const MagneticConfig cfg{1.0, 0.25};
  const PushforwardHistogram hist = sample_pushforward(cfg, opts.mc_samples, opts.seed);
  const ComparisonReport report = compare_to_closed_form(hist, cfg);
  m["samples"] = opts.mc_samples;
  m["max_interior_rel_err"] = report.max_interior_rel_err;
  m["chi_square"] = report.chi_square;
  m["degrees_of_freedom"] = report.degrees_of_freedom;
  m["center_slope"] = report.center_slope;
  m["boundary_slope"] = report.boundary_slope;
  m["threshold"] = 0.05;
  return report.max_interior_rel_err < 0.05;
}

bool preimage_counts(const Options& opts, Json& m) {
  Rng rng{opts.seed + 8};
  const MagneticConfig cfg{1.0, 0.25};
  const double r = radius(cfg);
  const double half = 0.5 * period(cfg);
  int bad_interior = 0, bad_boundary = 0, bad_outside = 0;
  for (int i = 0; i < 400; ++i) {
    const HPoint y = polar_point(uniform(rng, -kPi, kPi), uniform(rng, 0.01, 0.99) * r);
    bad_interior += preimages_cover(cfg, y).size() != 2;
  }
  for (int i = 0; i < 300; ++i) {
    bad_boundary += preimages_cover(cfg, psi(cfg, uniform(rng, 0.0, kTwoPi), half)).size() != 1;
  }
  for (int i = 0; i < 300; ++i) {
    const HPoint y = polar_point(uniform(rng, -kPi, kPi), r + uniform(rng, 0.01, 1.0));
    bad_outside += !preimages_cover(cfg, y).empty();
  }

  const FuchsianGroup group = bolza_group();
  const std::vector<Moebius> translates = translates_meeting_disk(group, r);
  const std::size_t bound = 2 * translates.size();
  const double extent = std::tanh(0.5 * group.circumradius);
  std::size_t max_count = 0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  constexpr int n = 100;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double u = -extent + (ix + 0.5) * 2.0 * extent / n;
      const double v = -extent + (iy + 0.5) * 2.0 * extent / n;
      if (u * u + v * v >= 1.0) continue;
      const HPoint y = from_disk(Complex{u, v});
      if (!in_fundamental_domain(group, y)) continue;
      const std::size_t count = density_surface(group, cfg, y, translates).preimages.size();
      max_count = std::max(max_count, count);
      violations += count > bound;
      ++evaluated;
    }
  }
  m["cover_failures"] = {{"interior", bad_interior}, {"boundary", bad_boundary}, {"outside", bad_outside}};
  m["surface_points"] = evaluated;
  m["translates"] = translates.size();
  m["max_surface_count"] = max_count;
  m["surface_bound"] = bound;
  return bad_interior == 0 && bad_boundary == 0 && bad_outside == 0 && violations == 0 && evaluated > 0;
}

bool lyapunov_trichotomy(const Options& opts, Json& m) {
  Rng rng{opts.seed + 9};
  double worst_bounded = 0.0;
  for (int i = 0; i < 5; ++i) {
    worst_bounded = std::max(worst_bounded, lyapunov_exponent(random_config(rng, 0.5, 2.0, 0.05, 0.95), 1e5));
  }
  for (double b : {0.5, 1.0, 2.0}) {
    worst_bounded = std::max(worst_bounded, lyapunov_exponent(MagneticConfig{b, 0.5 * b * b}, 1e5));
  }
  double worst_hyperbolic = 0.0;
  for (int i = 0; i < 10; ++i) {
    const MagneticConfig cfg = random_config(rng, 0.5, 2.0, 1.2, 4.0);
    const double expected = 0.5 * std::sqrt(-cfg.spectral_gap());
    worst_hyperbolic = std::max(worst_hyperbolic, std::abs(lyapunov_exponent(cfg, 1e4) - expected));
  }
  m["max_exponent_at_or_below_critical"] = worst_bounded;
  m["max_abs_error_supercritical"] = worst_hyperbolic;
  m["threshold"] = 1e-3;
  return worst_bounded < 1e-3 && worst_hyperbolic < 1e-3;
}

bool spectrum_check(const Options&, Json& m) {
  int mismatches = 0;
  int cases = 0;
  for (double b : {0.5, 1.0, 1.5, 2.0}) {
    const double ec = 0.5 * b * b;
    for (int k = 1; k <= 500; ++k) {
      const std::vector<SpectrumEntry> levels = ladder(k, b);
      if (levels.empty()) continue;
      for (int j = 0; j < 50; ++j) {
        const double e = ec * j / 50.0;
        int best = 0;
        for (const SpectrumEntry& s : levels) {
          if (std::abs(s.scaled - e) < std::abs(levels[static_cast<std::size_t>(best)].scaled - e)) best = s.m;
        }
        mismatches += select_level(k, b, e).m != best;
        ++cases;
      }
    }
  }
  // k * gap must not grow: its sup over the upper half of k <= 1e4 stays
  // below the sup over the lower half, for both candidate top indices.
  bool bounded = true;
  Json sups = Json::object();
  for (double b : {0.5, 1.0, 1.5, std::sqrt(2.0), 2.0, kPi / 2.0}) {
    double lower[2] = {0.0, 0.0};
    double upper[2] = {0.0, 0.0};
    for (int k = 1; k <= 10000; ++k) {
      const CriticalGap g = critical_gap(k, b);
      double* bucket = k <= 5000 ? lower : upper;
      bucket[0] = std::max(bucket[0], k * g.below_top);
      bucket[1] = std::max(bucket[1], k * g.at_top);
    }
    bounded = bounded && upper[0] <= lower[0] + 1e-12 && upper[1] <= lower[1] + 1e-12;
    sups[format_number(b)] = {{"sup_k_gap_m_eq_Nk_minus_1", std::max(lower[0], upper[0])},
                              {"sup_k_gap_m_eq_Nk", std::max(lower[1], upper[1])}};
  }
  m["selection_cases"] = cases;
  m["selection_mismatches"] = mismatches;
  m["critical_gap"] = sups;
  return mismatches == 0 && bounded;
}

bool bolza_integrity(const Options& opts, Json& m) {
  Rng rng{opts.seed + 11};
  const FuchsianGroup group = bolza_group();
  const double residual = group.relation_residual();
  const double area = fundamental_domain_area(group);
  int failures = 0;
  double worst = 0.0;
  const HPoint center = HPoint::center();
  for (int trial = 0; trial < 1000; ++trial) {
    // Domain point at least 1e-3 inside every side bisector.
    HPoint w = center;
    for (;;) {
      w = polar_point(uniform(rng, -kPi, kPi), uniform(rng, 0.0, group.circumradius));
      bool interior = true;
      for (const Moebius& g : group.generators) {
        interior = interior && hyp_dist(mobius_apply(g, w), center) > hyp_dist(w, center) + 1e-3;
      }
      if (interior) break;
    }
    HPoint z = w;
    for (int letter = 0; letter < 5; ++letter) {
      const auto k = static_cast<std::size_t>(std::uniform_int_distribution<int>{0, 7}(rng));
      z = mobius_apply(group.generators[k], z);
    }
    const DomainReduction red = reduce(group, z);
    const double err = hyp_dist(red.representative, w);
    const double back = hyp_dist(mobius_apply(red.element.inverse(), red.representative), z);
    worst = std::max({worst, err, back});
    failures += err > 1e-8 || back > 1e-8;
  }
  m["relation_residual"] = residual;
  m["domain_area"] = area;
  m["area_error"] = std::abs(area - 4.0 * kPi);
  m["round_trip_failures"] = failures;
  m["max_round_trip_error"] = worst;
  return residual < 1e-9 && std::abs(area - 4.0 * kPi) < 1e-6 && failures == 0;
}

bool equidistribution(const Options& opts, Json& m) {
  Rng rng{opts.seed + 12};
  const FuchsianGroup group = bolza_group();
  const MagneticConfig cfg{1.0, 0.5};
  const GridObservable bump = bump_observable(group, HPoint::center(), 1.5, 241);
  const double target = area_average(group, bump);
  double worst = 0.0;
  Json averages = Json::array();
  for (int i = 0; i < 3; ++i) {
    const HPoint z = polar_point(uniform(rng, -kPi, kPi), uniform(rng, 0.0, group.inradius));
    const HTangent p0{z, std::polar(cfg.speed() * z.y(), uniform(rng, 0.0, kTwoPi))};
    const double avg = birkhoff_average(group, cfg, bump, 2000.0, p0);
    averages.push_back(avg);
    worst = std::max(worst, std::abs(avg - target) / target);
  }
  m["bump"] = {{"center", "i"}, {"width", 1.5}};
  m["area_average"] = target;
  m["birkhoff_averages"] = averages;
  m["max_rel_error"] = worst;
  m["threshold"] = 0.05;
  return worst < 0.05;
}

bool flow_oracle(const Options& opts, Json& m) {
  const MagneticConfig cfg{1.0, 0.25};
  const HTangent start = shell_start(cfg, 0.3);
  constexpr int checkpoints = 200;
  const double horizon = 2.0 * period(cfg);
  HTangent numeric = start;
  double worst = 0.0;
  for (int k = 1; k <= checkpoints; ++k) {
    numeric = flow_numeric(cfg, numeric, horizon / checkpoints, 1e-4, opts.orientation).state;
    const HTangent exact = flow_exact(cfg, start, horizon * k / checkpoints);
    worst = std::max(worst, hyp_dist(exact.base, numeric.base));
  }
  m["max_base_distance"] = worst;
  m["threshold"] = 1e-8;
  m["orientation"] = opts.orientation == Orientation::Standard ? "standard" : "flipped";
  return worst < 1e-8;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "periodicity", 1.0, periodicity},
      {2, "footpoint-radius", 1.0, footpoint_radius},
      {3, "distance-profile-derivatives", 1.0, profile_derivatives},
      {4, "jacobian-identity", 1.0, jacobian_identity},
      {5, "density-mass", 10.0, density_mass_check},
      {6, "singularity-exponents", 5.0, singularity_exponents},
      {7, "monte-carlo-oracle", 60.0, monte_carlo},
      {8, "preimage-counts", 30.0, preimage_counts},
      {9, "lyapunov-trichotomy", 5.0, lyapunov_trichotomy},
      {10, "spectrum", 5.0, spectrum_check},
      {11, "bolza-integrity", 5.0, bolza_integrity},
      {12, "equidistribution", 60.0, equidistribution},
      {13, "flow-oracle", 10.0, flow_oracle},
  };
  return all;
}

CriterionResult run(const Criterion& c, const Options& opts) {
  CriterionResult r;
  r.id = c.id;
  r.name = c.name;
  r.budget_seconds = c.budget_seconds;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = c.check(opts, r.measured);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.passed = ok && (!opts.enforce_runtime || r.seconds <= r.budget_seconds);
  return r;
}

std::vector<CriterionResult> run_all(const Options& opts, const std::vector<int>& only,
                                     const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    out.push_back(run(c, opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string summary_line(const CriterionResult& r) {
  char head[128];
  std::snprintf(head, sizeof head, "[%s] %02d %-30s %8.3f s (budget %.0f s)  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.budget_seconds);
  std::string line = head + r.measured.dump();
  if (!r.error.empty()) line += "  error: " + r.error;
  return line;
}

Json to_json(const std::vector<CriterionResult>& results) {
  Json j;
  bool all = !results.empty();
  Json list = Json::array();
  for (const CriterionResult& r : results) {
    all = all && r.passed;
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"passed", r.passed},
                    {"seconds", r.seconds},
                    {"budget_seconds", r.budget_seconds},
                    {"measured", r.measured},
                    {"error", r.error}});
  }
  j["criteria"] = list;
  j["all_passed"] = all;
  return j;
}

}  // namespace magflow::verify
