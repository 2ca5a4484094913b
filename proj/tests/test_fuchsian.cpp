#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "magflow/fuchsian.hpp"
#include "magflow/zonal_torus.hpp"
#include "support.hpp"

using namespace magflow;
using namespace magflow::testing;

namespace {

const FuchsianGroup& group() {
  static const FuchsianGroup g = bolza_group();
  return g;
}

HPoint random_domain_point(Rng& rng, double margin) {
  for (;;) {
    const HPoint w = from_disk(std::polar(std::tanh(0.5 * uniform(rng, 0.0, group().circumradius)),
                                          uniform(rng, 0.0, 2.0 * kPi)));
    bool inside = true;
    for (const Moebius& g : group().generators) {
      inside = inside &&
               hyp_dist(mobius_apply(g, w), HPoint::center()) > hyp_dist(w, HPoint::center()) + margin;
    }
    if (inside) return w;
  }
}

bool contains(const std::vector<Moebius>& list, const Moebius& g) {
  return std::any_of(list.begin(), list.end(), [&](const Moebius& h) { return h.equals_up_to_sign(g, 1e-8); });
}

}  // namespace

TEST(Bolza, RelationAndGeometry) {
  const FuchsianGroup& g = group();
  EXPECT_EQ(g.genus, 2);
  EXPECT_EQ(g.generators.size(), 8u);
  EXPECT_LT(g.relation_residual(), 1e-9);
  EXPECT_NEAR(g.inradius, std::acosh(1.0 / std::tan(kPi / 8.0)), 1e-12);
  EXPECT_NEAR(g.circumradius, std::acosh(std::pow(1.0 / std::tan(kPi / 8.0), 2)), 1e-12);
  EXPECT_EQ(g.vertices.size(), 8u);
  for (const HPoint& v : g.vertices) EXPECT_NEAR(hyp_dist(v, HPoint::center()), g.circumradius, 1e-10);
}

TEST(Bolza, GeneratorsShareTraceAndPreserveDistance) {
  Rng rng{31};
  const double trace = std::abs(group().generators[0].trace());
  for (const Moebius& g : group().generators) {
    EXPECT_NEAR(g.det(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(g.trace()), trace, 1e-12);
    const HPoint z = random_point(rng), w = random_point(rng);
    EXPECT_NEAR(hyp_dist(mobius_apply(g, z), mobius_apply(g, w)), hyp_dist(z, w), 1e-10);
  }
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LT((group().generators[k] * group().generators[k + 4]).distance_to_identity(), 1e-12);
  }
}

TEST(Bolza, AreaIsFourPi) { EXPECT_NEAR(fundamental_domain_area(group()), 4.0 * kPi, 1e-6); }

TEST(Bolza, ChernIntegrality) {
  EXPECT_NO_THROW(require_chern_integral(group(), 0.5));
  EXPECT_NO_THROW(require_chern_integral(group(), 1.0));
  EXPECT_THROW(require_chern_integral(group(), 0.75), std::invalid_argument);
}

TEST(Reduce, DomainPointIsFixed) {
  Rng rng{32};
  const HPoint w = random_domain_point(rng, 1e-3);
  const DomainReduction r = reduce(group(), w);
  EXPECT_TRUE(r.word.empty());
  EXPECT_EQ(r.representative.z(), w.z());
}

TEST(Reduce, RoundTripAndIdempotence) {
  Rng rng{33};
  for (int trial = 0; trial < 1000; ++trial) {
    const HPoint w = random_domain_point(rng, 1e-3);
    HPoint z = w;
    for (int k = 0; k < 5; ++k) {
      z = mobius_apply(group().generators[std::uniform_int_distribution<std::size_t>{0, 7}(rng)], z);
    }
    const DomainReduction r = reduce(group(), z);
    EXPECT_LT(hyp_dist(r.representative, w), 1e-8);
    EXPECT_TRUE(in_fundamental_domain(group(), r.representative));
    EXPECT_LT(hyp_dist(mobius_apply(r.element, z), r.representative), 1e-8);
    EXPECT_TRUE(reduce(group(), r.representative).word.empty());
  }
}

TEST(Translates, SmallDiskIsIdentityOnly) {
  const auto list = translates_meeting_disk(group(), 0.1);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_LT(list[0].distance_to_identity(), 1e-12);
}

TEST(Translates, ReferenceDiskIsStableAndSymmetric) {
  const double r = radius(MagneticConfig{1.0, 0.25});
  const auto a = translates_meeting_disk(group(), r);
  const auto b = translates_meeting_disk(group(), r);
  EXPECT_EQ(a.size(), 9u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(a[i].equals_up_to_sign(b[i], 0.0));
  for (const Moebius& g : a) EXPECT_TRUE(contains(a, g.inverse()));
}

TEST(Translates, MonotoneInRadius) {
  const auto small = translates_meeting_disk(group(), 1.0);
  const auto large = translates_meeting_disk(group(), 3.0);
  EXPECT_LE(small.size(), large.size());
  for (const Moebius& g : small) EXPECT_TRUE(contains(large, g));
}

TEST(Translates, CapsLargeDisks) {
  try {
    translates_meeting_disk(group(), 6.0);
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_STREQ(e.what(), "disk too large for exact enumeration");
  }
}

TEST(SurfaceDensity, SingleTranslateMatchesCover) {
  const MagneticConfig cfg{1.0, 0.05};
  ASSERT_LT(radius(cfg), group().inradius);
  Rng rng{34};
  for (int i = 0; i < 100; ++i) {
    const HPoint y = random_domain_point(rng, 0.0);
    if (hyp_dist(y, HPoint::center()) < 1e-6) continue;
    const DensitySample s = density_surface(group(), cfg, y);
    EXPECT_DOUBLE_EQ(s.alpha_raw, density_cover(cfg, y).alpha_raw);
  }
}

TEST(SurfaceDensity, FarPointIsZeroForSmallDisk) {
  const MagneticConfig cfg{1.0, 0.05};
  const HPoint y = from_disk(std::polar(std::tanh(0.5 * (group().inradius - 0.05)), 0.0));
  EXPECT_EQ(density_surface(group(), cfg, y).alpha_raw, 0.0);
}

TEST(SurfaceDensity, CountBoundedByTranslates) {
  const MagneticConfig cfg{1.0, 0.25};
  const auto list = translates_meeting_disk(group(), radius(cfg));
  Rng rng{35};
  for (int i = 0; i < 500; ++i) {
    const HPoint y = random_domain_point(rng, 0.0);
    EXPECT_LE(density_surface(group(), cfg, y, list).preimages.size(), 2 * list.size());
  }
}

TEST(SurfaceDensity, RequiresReducedPoint) {
  const MagneticConfig cfg{1.0, 0.25};
  EXPECT_THROW(density_surface(group(), cfg, HPoint{0.0, 50.0}), std::invalid_argument);
}

TEST(SurfaceDensity, MassFoldsToTwoPiPeriod) {
  const MagneticConfig cfg{1.0, 0.25};
  const double target = 2.0 * kPi * period(cfg);
  EXPECT_NEAR(surface_density_mass(group(), cfg, 200'000), target, 0.02 * target);
}

TEST(Birkhoff, ConstantObservableIsExact) {
  const Box box = domain_bounding_box(group());
  const GridObservable f{box.x_min, box.x_max, box.y_min, box.y_max, 3, 3,
                         std::vector<double>(9, 0.7), std::vector<bool>(9, true)};
  const MagneticConfig cfg{1.0, 0.5};
  EXPECT_NEAR(birkhoff_average(group(), cfg, f, 50.0, shell_start(cfg, 0.2)), 0.7, 1e-12);
  EXPECT_NEAR(area_average(group(), f), 0.7, 1e-12);
}

TEST(Birkhoff, RequiresCriticalEnergy) {
  const GridObservable f = bump_observable(group(), HPoint::center(), 1.0, 41);
  const MagneticConfig cfg{1.0, 0.25};
  try {
    birkhoff_average(group(), cfg, f, 10.0, shell_start(cfg));
    FAIL() << "expected an exception";
  } catch (const std::exception& e) {
    EXPECT_STREQ(e.what(), "equidistribution test requires critical energy");
  }
}

TEST(Birkhoff, ApproachesAreaAverageAtLongHorizon) {
  const MagneticConfig cfg{1.0, 0.5};
  const GridObservable f = bump_observable(group(), HPoint::center(), 1.5, 241);
  const double target = area_average(group(), f);
  Rng rng{36};
  for (int i = 0; i < 2; ++i) {
    const HPoint z = random_domain_point(rng, 0.0);
    const HTangent p0{z, std::polar(cfg.speed() * z.y(), uniform(rng, 0.0, 2.0 * kPi))};
    EXPECT_NEAR(birkhoff_average(group(), cfg, f, 20000.0, p0), target, 0.05 * target);
  }
}

TEST(Observable, MaskedOutsideDomain) {
  const GridObservable f = bump_observable(group(), HPoint::center(), 5.0, 81);
  EXPECT_GT(f(HPoint::center()), 0.99);
  const HPoint far = from_disk(std::polar(std::tanh(0.5 * (group().circumradius + 0.5)), 0.3));
  EXPECT_EQ(f(far), 0.0);
}
