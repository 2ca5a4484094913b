#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "magflow/fuchsian.hpp"
#include "magflow/zonal_torus.hpp"

namespace magflow {

/// Cell-centered nx x ny grid over [-extent, extent]^2 in Poincare-disk
/// coordinates (the center i maps to the origin).
struct DensityGridSpec {
  std::size_t nx = 200;
  std::size_t ny = 200;
  double extent = 0.9;
};

struct DensityGridRow {
  double x, y;
  double d_to_center;
  double alpha_raw;
  double alpha_normalized;
  int n_preimages;
  std::string flag;
};

/// Points outside the unit disk are flagged "OffModel"; a cell hitting the
/// center is flagged "Center" with infinite density.
std::vector<DensityGridRow> density_grid_cover(const MagneticConfig& cfg, const DensityGridSpec& spec,
                                               BandWidths bands = {});

/// Surface density on the same grid; points outside the fundamental domain
/// are flagged "OffDomain".
std::vector<DensityGridRow> density_grid_surface(const FuchsianGroup& group, const MagneticConfig& cfg,
                                                 const DensityGridSpec& spec, BandWidths bands = {});

/// Riemann sum of alpha_raw against hyperbolic area over finite-valued cells.
double grid_mass(const std::vector<DensityGridRow>& rows, const DensityGridSpec& spec);

/// Columns x, y, d_to_center, alpha_raw, alpha_normalized, n_preimages, flag.
void write_density_grid_csv(std::ostream& os, const std::vector<DensityGridRow>& rows);

nlohmann::json density_sidecar(const MagneticConfig& cfg, const DensityGridSpec& spec, BandWidths bands,
                               const std::string& surface);

}  // namespace magflow
