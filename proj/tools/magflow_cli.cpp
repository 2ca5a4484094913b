#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magflow/density_grid.hpp"
#include "magflow/fuchsian.hpp"
#include "magflow/io.hpp"
#include "magflow/mc_oracle.hpp"
#include "magflow/spectrum.hpp"
#include "magflow/verify.hpp"
#include "magflow/zonal_torus.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace magflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double field = 1.0;
  double energy = 0.25;
  int k = 10;
  std::string surface = "cover";
  std::string grid = "200";
  std::size_t n_samples = 10'000'000;
  std::uint64_t seed = 20240917;
  std::string out = ".";
  std::string bands = "1e-3,1e-3";
};

struct FlowOptions {
  std::optional<double> horizon;
  double dt = 1e-4;
  std::size_t rows = 1000;
  double lyapunov_horizon = 1e4;
};

struct EquidistOptions {
  double horizon = 2000.0;
  int starts = 3;
  std::string observable;
};

struct VerifyOptions {
  std::vector<int> only;
  bool flip = false;
  bool no_time_limit = false;
};

MagneticConfig make_config(const RunConfig& rc) {
  try {
    return MagneticConfig{rc.field, rc.energy};
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void require_subcritical(const MagneticConfig& cfg) {
  if (!(cfg.energy() > 0.0) || cfg.regime() != Regime::Subcritical) {
    throw ConfigError("this command needs 0 < E < B^2/2 (got B=" + format_number(cfg.field()) +
                      ", E=" + format_number(cfg.energy()) + ")");
  }
}

const FuchsianGroup& surface_group(const RunConfig& rc) {
  static const FuchsianGroup group = bolza_group();
  try {
    require_chern_integral(group, rc.field);
  } catch (const std::exception& e) {
    std::cerr << "warning: " << e.what() << " (2B(g-1) must be an integer on the Bolza surface)\n";
    throw ConfigError(e.what());
  }
  return group;
}

DensityGridSpec parse_grid(const std::string& text) {
  DensityGridSpec spec;
  const auto x = text.find('x');
  try {
    spec.nx = std::stoul(text.substr(0, x));
    spec.ny = x == std::string::npos ? spec.nx : std::stoul(text.substr(x + 1));
  } catch (const std::exception&) {
    throw ConfigError("grid must look like N or NXxNY, got '" + text + "'");
  }
  if (spec.nx == 0 || spec.ny == 0) throw ConfigError("grid dimensions must be positive");
  return spec;
}

BandWidths parse_bands(const std::string& text) {
  BandWidths bands;
  const auto comma = text.find(',');
  try {
    bands.center = std::stod(text.substr(0, comma));
    bands.boundary = comma == std::string::npos ? bands.center : std::stod(text.substr(comma + 1));
  } catch (const std::exception&) {
    throw ConfigError("bands must look like W or WC,WB, got '" + text + "'");
  }
  if (!(bands.center >= 0.0) || !(bands.boundary >= 0.0)) throw ConfigError("band widths must be nonnegative");
  return bands;
}

fs::path output_dir(const RunConfig& rc) {
  fs::path dir{rc.out};
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os{path};
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

json cfg_json(const MagneticConfig& cfg) {
  return {{"B", cfg.field()}, {"E", cfg.energy()}, {"regime", std::string{to_string(cfg.regime())}}};
}

int cmd_flow(const RunConfig& rc, const FlowOptions& fo) {
  const MagneticConfig cfg = make_config(rc);
  const bool periodic = cfg.regime() == Regime::Subcritical;
  const double horizon = fo.horizon.value_or(periodic ? 2.0 * period(cfg) : 20.0);
  if (!(horizon > 0.0) || !(fo.dt > 0.0) || fo.rows == 0) throw ConfigError("horizon, dt and rows must be positive");

  const HTangent start = shell_start(cfg);
  std::vector<TrajectorySample> exact, numeric;
  exact.push_back({0.0, start});
  numeric.push_back({0.0, start});
  HTangent state = start;
  bool step_too_large = false;
  double divergence = 0.0;
  for (std::size_t i = 1; i <= fo.rows; ++i) {
    const double t = horizon * static_cast<double>(i) / static_cast<double>(fo.rows);
    const NumericFlowResult step = flow_numeric(cfg, state, t - numeric.back().t, fo.dt);
    state = step.state;
    step_too_large = step_too_large || step.step_too_large;
    exact.push_back({t, flow_exact(cfg, start, t)});
    numeric.push_back({t, state});
    divergence = std::max(divergence, hyp_dist(exact.back().state.base, state.base));
  }

  const fs::path dir = output_dir(rc);
  {
    std::ofstream os = open_out(dir / "trajectory_exact.csv");
    write_trajectory_csv(os, exact);
  }
  {
    std::ofstream os = open_out(dir / "trajectory_numeric.csv");
    write_trajectory_csv(os, numeric);
  }

  json s;
  s["cfg"] = cfg_json(cfg);
  s["speed"] = cfg.speed();
  s["horizon"] = horizon;
  s["dt"] = fo.dt;
  s["max_divergence"] = divergence;
  s["step_too_large"] = step_too_large;
  s["lyapunov"] = lyapunov_exponent(cfg, fo.lyapunov_horizon);
  s["lyapunov_horizon"] = fo.lyapunov_horizon;
  if (periodic) {
    const double t_period = period(cfg);
    const HTangent back = flow_exact(cfg, start, t_period);
    s["period"] = t_period;
    s["return_residual"] = hyp_dist(start.base, back.base) + std::abs(back.v - start.v) / start.base.y();
  }
  write_json(dir / "summary.json", s);
  std::cout << s.dump(2) << '\n';
  return kExitOk;
}

// Log-log slope of alpha_raw along a ray, near the center and just inside the boundary.
json exponent_fits(const MagneticConfig& cfg) {
  const double r = radius(cfg);
  std::vector<double> cx, cy, bx, by;
  for (int k = 0; k <= 12; ++k) {
    const double d = std::pow(10.0, -3.0 - 0.25 * k);
    cx.push_back(std::log(d));
    cy.push_back(std::log(alpha_raw_at_distance(cfg, d)));
    const double tau = std::pow(10.0, -4.0 - 0.25 * k);
    bx.push_back(std::log(tau));
    by.push_back(std::log(alpha_raw_at_distance(cfg, r - tau)));
  }
  return {{"center_slope", least_squares_slope(cx, cy)}, {"boundary_slope", least_squares_slope(bx, by)}};
}

int cmd_density(const RunConfig& rc) {
  const MagneticConfig cfg = make_config(rc);
  require_subcritical(cfg);
  const DensityGridSpec spec = parse_grid(rc.grid);
  const BandWidths bands = parse_bands(rc.bands);
  if (rc.surface != "cover" && rc.surface != "bolza") throw ConfigError("surface must be cover or bolza");

  const fs::path dir = output_dir(rc);
  json side = density_sidecar(cfg, spec, bands, rc.surface);
  const double target = 2.0 * std::numbers::pi * period(cfg);
  side["radius"] = radius(cfg);
  side["period"] = period(cfg);
  side["mass_target"] = target;
  side["exponent_fits"] = exponent_fits(cfg);

  std::vector<DensityGridRow> rows;
  if (rc.surface == "cover") {
    rows = density_grid_cover(cfg, spec, bands);
    const double quad = density_mass(cfg, 256);
    side["mass_quadrature"] = quad;
    side["mass_quadrature_rel_err"] = std::abs(quad - target) / target;
  } else {
    const FuchsianGroup& group = surface_group(rc);
    try {
      side["translates"] = translates_meeting_disk(group, radius(cfg)).size();
    } catch (const std::domain_error& e) {
      side["enumeration_cap_exceeded"] = true;
      side["error"] = e.what();
      write_json(dir / "density.json", side);
      std::cerr << "density: " << e.what() << "; no grid written\n";
      return kExitOk;
    }
    rows = density_grid_surface(group, cfg, spec, bands);
  }
  {
    std::ofstream os = open_out(dir / "density.csv");
    write_density_grid_csv(os, rows);
  }
  const double mass = grid_mass(rows, spec);
  side["mass_grid"] = mass;
  side["mass_grid_rel_err"] = std::abs(mass - target) / target;
  write_json(dir / "density.json", side);
  std::cout << side.dump(2) << '\n';
  return kExitOk;
}

int cmd_spectrum(const RunConfig& rc, std::optional<double> energy) {
  if (rc.k < 1) throw ConfigError("k must be at least 1");
  if (!(rc.field > 0.0)) throw ConfigError("B must be positive");
  const fs::path dir = output_dir(rc);
  const std::vector<SpectrumEntry> rows = ladder(rc.k, rc.field);
  {
    std::ofstream os = open_out(dir / "ladder.csv");
    write_ladder_csv(os, rows);
  }

  json s;
  s["k"] = rc.k;
  s["B"] = rc.field;
  s["levels"] = level_count(rc.k, rc.field);
  s["critical_energy"] = 0.5 * rc.field * rc.field;
  const CriticalGap gap = critical_gap(rc.k, rc.field);
  s["critical_gap"] = {{"m_eq_Nk_minus_1", json_number(gap.below_top)}, {"m_eq_Nk", json_number(gap.at_top)}};
  if (energy) {
    if (!(*energy >= 0.0) || *energy >= 0.5 * rc.field * rc.field) throw ConfigError("selection needs 0 <= E < B^2/2");
    const SpectrumEntry sel = select_level(rc.k, rc.field, *energy);
    s["selected"] = {{"E", *energy}, {"m", sel.m}, {"lambda", sel.lambda}, {"scaled", sel.scaled}};
  }
  write_json(dir / "spectrum.json", s);
  std::cout << s.dump(2) << '\n';
  return kExitOk;
}

int cmd_sample(const RunConfig& rc) {
  const MagneticConfig cfg = make_config(rc);
  require_subcritical(cfg);
  if (rc.n_samples < 10'000) throw ConfigError("n must be at least 10000");
  const PushforwardHistogram hist = sample_pushforward(cfg, rc.n_samples, rc.seed);
  const ComparisonReport report = compare_to_closed_form(hist, cfg);
  const fs::path dir = output_dir(rc);
  {
    std::ofstream os = open_out(dir / "histogram.csv");
    write_histogram_csv(os, report);
  }
  const json j = report_json(hist, report);
  write_json(dir / "report.json", j);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_equidist(const RunConfig& rc, const EquidistOptions& eo) {
  const MagneticConfig cfg = make_config(rc);
  if (std::abs(cfg.energy() - cfg.critical_energy()) > 1e-9) {
    throw ConfigError("equidist needs E = B^2/2 (critical energy)");
  }
  if (!(eo.horizon > 0.0) || eo.starts < 1) throw ConfigError("T and starts must be positive");
  const FuchsianGroup& group = surface_group(rc);
  const fs::path dir = output_dir(rc);

  std::optional<GridObservable> observable;
  if (eo.observable.empty()) {
    observable.emplace(bump_observable(group, HPoint::center(), 1.5, 241));
    {
      std::ofstream os = open_out(dir / "observable.csv");
      write_observable_csv(os, *observable);
    }
  } else {
    std::ifstream is{eo.observable};
    if (!is) throw ConfigError("cannot read observable " + eo.observable);
    try {
      observable.emplace(read_observable_csv(is));
    } catch (const std::runtime_error& e) {
      throw ConfigError(e.what());
    }
  }

  const double target = area_average(group, *observable);
  std::mt19937_64 rng{rc.seed};
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  json runs = json::array();
  double worst = 0.0;
  for (int i = 0; i < eo.starts; ++i) {
    const double d = unit(rng) * group.inradius;
    const HPoint z = from_disk(std::polar(std::tanh(0.5 * d), 2.0 * std::numbers::pi * unit(rng)));
    const HTangent p0{z, std::polar(cfg.speed() * z.y(), 2.0 * std::numbers::pi * unit(rng))};
    const double avg = birkhoff_average(group, cfg, *observable, eo.horizon, p0);
    const double rel = target != 0.0 ? std::abs(avg - target) / std::abs(target) : std::abs(avg);
    worst = std::max(worst, rel);
    runs.push_back({{"z", {z.x(), z.y()}}, {"v", {p0.v.real(), p0.v.imag()}}, {"average", avg}, {"rel_err", rel}});
  }
  json s;
  s["cfg"] = cfg_json(cfg);
  s["T"] = eo.horizon;
  s["area_average"] = target;
  s["runs"] = runs;
  s["max_rel_err"] = worst;
  write_json(dir / "equidist.json", s);
  std::cout << s.dump(2) << '\n';
  return kExitOk;
}

int cmd_group(const RunConfig& rc) {
  const fs::path dir = output_dir(rc);
  const json j = group_json(bolza_group());
  write_json(dir / "group.json", j);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& rc, const VerifyOptions& vo) {
  verify::Options opts;
  opts.seed = rc.seed;
  opts.mc_samples = rc.n_samples;
  opts.orientation = vo.flip ? Orientation::Flipped : Orientation::Standard;
  opts.enforce_runtime = !vo.no_time_limit;
  const auto results = verify::run_all(opts, vo.only, [](const verify::CriterionResult& r) {
    std::cout << verify::summary_line(r) << std::endl;
  });
  if (results.empty()) throw ConfigError("no criterion matches --only");
  const json j = verify::to_json(results);
  write_json(output_dir(rc) / "verify.json", j);
  const bool ok = j["all_passed"].get<bool>();
  std::cout << (ok ? "verify: all criteria passed" : "verify: FAILED") << '\n';
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic geodesic flow on hyperbolic surfaces: trajectories, torus densities, spectra, oracles"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file (key = value, [subcommand] sections); flags override it");

  RunConfig rc;
  FlowOptions fo;
  EquidistOptions eo;
  VerifyOptions vo;
  std::optional<double> select_energy;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--B", rc.field, "magnetic field strength")->capture_default_str();
    sub->add_option("--E", rc.energy, "energy level")->capture_default_str();
    sub->add_option("--seed", rc.seed, "64-bit seed")->capture_default_str();
    sub->add_option("--out", rc.out, "output directory")->capture_default_str();
  };

  CLI::App* flow = app.add_subcommand("flow", "exact and numeric trajectories from (i, v0)");
  common(flow);
  flow->add_option("--T", fo.horizon, "time horizon (default 2 periods, or 20)");
  flow->add_option("--dt", fo.dt, "numeric step")->capture_default_str();
  flow->add_option("--rows", fo.rows, "trajectory rows")->capture_default_str();
  flow->add_option("--lyapunov-horizon", fo.lyapunov_horizon, "cocycle horizon")->capture_default_str();

  CLI::App* density = app.add_subcommand("density", "density grid on the cover or the Bolza surface");
  common(density);
  density->add_option("--surface", rc.surface, "cover or bolza")->capture_default_str();
  density->add_option("--grid", rc.grid, "N or NXxNY")->capture_default_str();
  density->add_option("--bands", rc.bands, "singular band widths WC,WB relative to R_E")->capture_default_str();

  CLI::App* spectrum = app.add_subcommand("spectrum", "Landau ladder table");
  spectrum->add_option("--B", rc.field, "magnetic field strength")->capture_default_str();
  spectrum->add_option("--k", rc.k, "semiclassical index")->capture_default_str();
  spectrum->add_option("--E", select_energy, "also select the level nearest E");
  spectrum->add_option("--out", rc.out, "output directory")->capture_default_str();

  CLI::App* sample = app.add_subcommand("sample", "Monte Carlo pushforward histogram vs closed form");
  common(sample);
  sample->add_option("--n", rc.n_samples, "number of samples")->capture_default_str();

  CLI::App* equidist = app.add_subcommand("equidist", "Birkhoff averages on the Bolza surface at E = B^2/2");
  common(equidist);
  equidist->add_option("--T", eo.horizon, "averaging horizon")->capture_default_str();
  equidist->add_option("--starts", eo.starts, "number of initial conditions")->capture_default_str();
  equidist->add_option("--observable", eo.observable, "observable CSV (x,y,value,inside); default bump");

  CLI::App* group = app.add_subcommand("group", "export the Bolza group as JSON");
  group->add_option("--out", rc.out, "output directory")->capture_default_str();

  CLI::App* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_option("--seed", rc.seed, "seed")->capture_default_str();
  verify_cmd->add_option("--n", rc.n_samples, "Monte Carlo samples")->capture_default_str();
  verify_cmd->add_option("--out", rc.out, "output directory")->capture_default_str();
  verify_cmd->add_option("--only", vo.only, "criterion ids");
  verify_cmd->add_flag("--flip-orientation", vo.flip, "integrate with the opposite orientation (mutation check)");
  verify_cmd->add_flag("--no-time-limit", vo.no_time_limit, "ignore runtime budgets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*flow) return cmd_flow(rc, fo);
    if (*density) return cmd_density(rc);
    if (*spectrum) return cmd_spectrum(rc, select_energy);
    if (*sample) return cmd_sample(rc);
    if (*equidist) return cmd_equidist(rc, eo);
    if (*group) return cmd_group(rc);
    if (*verify_cmd) return cmd_verify(rc, vo);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
