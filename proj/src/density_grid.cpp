#include "magflow/density_grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "magflow/io.hpp"
#include "magflow/parallel.hpp"

namespace magflow {

namespace {

double cell_coord(std::size_t i, std::size_t n, double extent) {
  return -extent + (static_cast<double>(i) + 0.5) * 2.0 * extent / static_cast<double>(n);
}

DensityGridRow off_row(double x, double y, const char* flag) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {x, y, nan, 0.0, 0.0, 0, flag};
}

DensityGridRow from_sample(double x, double y, const DensitySample& s) {
  return {x, y, s.distance_to_center, s.alpha_raw, s.alpha_normalized, static_cast<int>(s.preimages.size()),
          std::string{to_string(s.flag)}};
}

// Evaluates cell(x, y) over the grid in parallel chunks of rows.
template <typename Cell>
std::vector<DensityGridRow> evaluate(const DensityGridSpec& spec, Cell&& cell) {
  std::vector<DensityGridRow> rows(spec.nx * spec.ny);
  parallel_chunks(rows.size(), [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t k = begin; k < end; ++k) {
      const double x = cell_coord(k % spec.nx, spec.nx, spec.extent);
      const double y = cell_coord(k / spec.nx, spec.ny, spec.extent);
      if (x * x + y * y >= 1.0) {
        rows[k] = off_row(x, y, "OffModel");
      } else {
        rows[k] = cell(x, y, from_disk(Complex{x, y}));
      }
    }
  });
  return rows;
}

DensityGridRow center_row(double x, double y, const MagneticConfig& cfg) {
  const double inf = std::numeric_limits<double>::infinity();
  return {x, y, 0.0, inf, inf / (2.0 * std::numbers::pi * period(cfg)), 0, "Center"};
}

}  // namespace

std::vector<DensityGridRow> density_grid_cover(const MagneticConfig& cfg, const DensityGridSpec& spec,
                                               BandWidths bands) {
  return evaluate(spec, [&](double x, double y, const HPoint& p) {
    if (hyp_dist(HPoint::center(), p) < 1e-9) return center_row(x, y, cfg);
    return from_sample(x, y, density_cover(cfg, p, bands));
  });
}

std::vector<DensityGridRow> density_grid_surface(const FuchsianGroup& group, const MagneticConfig& cfg,
                                                 const DensityGridSpec& spec, BandWidths bands) {
  const std::vector<Moebius> translates = translates_meeting_disk(group, radius(cfg));
  return evaluate(spec, [&](double x, double y, const HPoint& p) {
    if (!in_fundamental_domain(group, p)) return off_row(x, y, "OffDomain");
    if (hyp_dist(HPoint::center(), p) < 1e-9) return center_row(x, y, cfg);
    return from_sample(x, y, density_surface(group, cfg, p, translates, bands));
  });
}

double grid_mass(const std::vector<DensityGridRow>& rows, const DensityGridSpec& spec) {
  const double cell = (2.0 * spec.extent / static_cast<double>(spec.nx)) * (2.0 * spec.extent / static_cast<double>(spec.ny));
  double mass = 0.0;
  for (const DensityGridRow& r : rows) {
    if (!std::isfinite(r.alpha_raw)) continue;
    const double s = 1.0 - (r.x * r.x + r.y * r.y);
    // Hyperbolic area element of the disk model: 4 du dv / (1 - |w|^2)^2.
    mass += r.alpha_raw * 4.0 * cell / (s * s);
  }
  return mass;
}

void write_density_grid_csv(std::ostream& os, const std::vector<DensityGridRow>& rows) {
  os << "x,y,d_to_center,alpha_raw,alpha_normalized,n_preimages,flag\n";
  for (const DensityGridRow& r : rows) {
    os << format_number(r.x) << ',' << format_number(r.y) << ',' << format_number(r.d_to_center) << ','
       << format_number(r.alpha_raw) << ',' << format_number(r.alpha_normalized) << ',' << r.n_preimages << ','
       << r.flag << '\n';
  }
}

nlohmann::json density_sidecar(const MagneticConfig& cfg, const DensityGridSpec& spec, BandWidths bands,
                               const std::string& surface) {
  nlohmann::json j;
  j["cfg"] = {{"B", cfg.field()}, {"E", cfg.energy()}, {"regime", std::string{to_string(cfg.regime())}}};
  j["surface"] = surface;
  j["grid"] = {{"nx", spec.nx}, {"ny", spec.ny}, {"extent", spec.extent}, {"coordinates", "poincare_disk"},
               {"cell_centered", true}};
  j["bands"] = {{"center", bands.center}, {"boundary", bands.boundary}, {"relative_to", "R_E"}};
  return j;
}

}  // namespace magflow
