#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "magflow/fuchsian.hpp"
#include "magflow/io.hpp"
#include "magflow/density_grid.hpp"

using namespace magflow;

TEST(Format, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 8.885765876316732, -1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_number(std::nan("")), "nan");
  EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()).get<std::string>(), "inf");
  EXPECT_EQ(json_number(2.5).get<double>(), 2.5);
}

TEST(Csv, TrajectoryAndLadderHeaders) {
  std::ostringstream t;
  write_trajectory_csv(t, {{0.5, HTangent{HPoint::center(), Complex{0.0, 0.25}}}});
  EXPECT_EQ(t.str(), "t,re_z,im_z,re_v,im_v\n0.5,0,1,0,0.25\n");
  std::ostringstream l;
  write_ladder_csv(l, {{10, 9, 50.0, 0.5}});
  EXPECT_EQ(l.str(), "k,m,lambda,scaled\n10,9,50,0.5\n");
}

TEST(Csv, ObservableRoundTrip) {
  const FuchsianGroup group = bolza_group();
  const GridObservable f = bump_observable(group, HPoint::center(), 1.2, 37);
  std::stringstream ss;
  write_observable_csv(ss, f);
  const GridObservable g = read_observable_csv(ss);
  ASSERT_EQ(g.nx(), f.nx());
  ASSERT_EQ(g.ny(), f.ny());
  EXPECT_EQ(g.x_min(), f.x_min());
  EXPECT_EQ(g.y_max(), f.y_max());
  for (std::size_t iy = 0; iy < f.ny(); ++iy) {
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
      EXPECT_EQ(g.value(ix, iy), f.value(ix, iy));
      EXPECT_EQ(g.inside(ix, iy), f.inside(ix, iy));
    }
  }
  const HPoint p = from_disk(Complex{0.1, -0.2});
  EXPECT_EQ(g(p), f(p));
}

TEST(Csv, ObservableRejectsMalformedInput) {
  std::istringstream empty{""};
  EXPECT_THROW(read_observable_csv(empty), std::runtime_error);
  std::istringstream bad{"x,y,value,inside\n0,1,zz,1\n"};
  EXPECT_THROW(read_observable_csv(bad), std::runtime_error);
}

TEST(Json, GroupExport) {
  const nlohmann::json j = group_json(bolza_group());
  EXPECT_EQ(j["genus"], 2);
  EXPECT_EQ(j["generators"].size(), 8u);
  EXPECT_EQ(j["vertices"].size(), 8u);
  EXPECT_LT(j["relation_residual"].get<double>(), 1e-9);
  const double a = std::stod(j["generators"][0][0].get<std::string>());
  EXPECT_EQ(a, bolza_group().generators[0].a());
}

TEST(DensityGrid, CoverFlagsAndMass) {
  const MagneticConfig cfg{1.0, 0.25};
  DensityGridSpec spec;
  spec.nx = spec.ny = 200;
  const auto rows = density_grid_cover(cfg, spec);
  ASSERT_EQ(rows.size(), 40000u);
  const double target = 2.0 * std::numbers::pi * period(cfg);
  EXPECT_NEAR(grid_mass(rows, spec), target, 0.01 * target);
  std::ostringstream os;
  write_density_grid_csv(os, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "x,y,d_to_center,alpha_raw,alpha_normalized,n_preimages,flag");
}

TEST(DensityGrid, SurfaceMatchesCoverInSingleTranslateRegime) {
  const MagneticConfig cfg{1.0, 0.05};
  DensityGridSpec spec;
  spec.nx = spec.ny = 61;
  const auto cover = density_grid_cover(cfg, spec);
  const auto surface = density_grid_surface(bolza_group(), cfg, spec);
  ASSERT_EQ(cover.size(), surface.size());
  int compared = 0;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    if (surface[i].flag == "OffDomain" || surface[i].flag == "OffModel") continue;
    EXPECT_EQ(surface[i].alpha_raw, cover[i].alpha_raw);
    EXPECT_EQ(surface[i].n_preimages, cover[i].n_preimages);
    ++compared;
  }
  EXPECT_GT(compared, 1000);
}
