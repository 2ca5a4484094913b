#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "magflow/zonal_torus.hpp"
#include "support.hpp"

using namespace magflow;
using namespace magflow::testing;

namespace {

const MagneticConfig kRef{1.0, 0.25};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// Independent closed forms: sinh(phi/2) = (lambda/gamma)|sin(gamma t/2)|, and the
// density as a function of d obtained by inverting it.
double phi_oracle(const MagneticConfig& cfg, double t) {
  const double s = cfg.speed() / cfg.gamma() * std::abs(std::sin(0.5 * cfg.gamma() * t));
  return 2.0 * std::asinh(s);
}

double alpha_oracle(const MagneticConfig& cfg, double d) {
  const double s = std::sinh(0.5 * d);
  const double ratio = cfg.gamma() / cfg.speed();
  return 1.0 / (cfg.speed() * s * std::sqrt(1.0 - ratio * ratio * s * s));
}

double angle_gap(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

}  // namespace

TEST(Psi, StartsAtCenter) {
  for (double theta : {0.0, 1.0, 4.0}) EXPECT_NEAR(std::abs(psi(kRef, theta, 0.0).z() - kI), 0.0, 1e-15);
}

TEST(Psi, HalfPeriodFootpoint) {
  const HPoint y = psi(kRef, 0.0, period(kRef) / 2.0);
  EXPECT_NEAR(std::abs(y.z() - Complex{std::sqrt(2.0), 0.5} / 1.5), 0.0, 1e-14);
  EXPECT_NEAR(hyp_dist(HPoint::center(), y), radius(kRef), 1e-13);
}

TEST(Psi, DistanceIsRotationInvariant) {
  Rng rng{21};
  for (int i = 0; i < 20; ++i) {
    const double t = uniform(rng, 0.0, period(kRef));
    const double d0 = hyp_dist(HPoint::center(), psi(kRef, 0.0, t));
    for (int k = 0; k < 32; ++k) {
      EXPECT_NEAR(hyp_dist(HPoint::center(), psi(kRef, 2.0 * kPi * k / 32.0, t)), d0, 1e-12);
    }
  }
}

TEST(Psi, TrajectoriesStayOnShell) {
  Rng rng{22};
  for (int i = 0; i < 50; ++i) {
    const double theta = uniform(rng, 0.0, 2.0 * kPi);
    const HTangent p = flow_exact(kRef, shell_start(kRef, theta), uniform(rng, 0.0, period(kRef)));
    EXPECT_NEAR(p.speed(), kRef.speed(), 1e-9);
  }
}

TEST(Psi, RejectsEnergiesOutsideOpenInterval) {
  EXPECT_EQ(error_of([] { psi(MagneticConfig{1.0, 0.5}, 0.0, 1.0); }), "torus undefined at this energy");
  EXPECT_EQ(error_of([] { psi(MagneticConfig{1.0, 0.0}, 0.0, 1.0); }), "torus undefined at this energy");
}

TEST(Radius, Examples) {
  EXPECT_EQ(radius(MagneticConfig{1.0, 0.0}), 0.0);
  EXPECT_NEAR(radius(kRef), 1.762747, 1e-6);
  EXPECT_GT(radius(MagneticConfig{1.0, 0.49999}), 10.0);
  EXPECT_THROW(radius(MagneticConfig{1.0, 0.5}), std::domain_error);
}

TEST(Radius, MatchesArccoshForm) {
  Rng rng{23};
  for (int i = 0; i < 100; ++i) {
    const MagneticConfig cfg = random_subcritical(rng);
    const double b2 = cfg.field() * cfg.field();
    const double e2 = 2.0 * cfg.energy();
    EXPECT_NEAR(radius(cfg), std::acosh((b2 + e2) / (b2 - e2)), 1e-10 * (1.0 + radius(cfg)));
  }
}

TEST(PhiProfile, EndpointsAndClosedForm) {
  EXPECT_NEAR(phi_profile(kRef, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(phi_profile(kRef, period(kRef)), 0.0, 1e-12);
  Rng rng{24};
  for (int i = 0; i < 200; ++i) {
    const MagneticConfig cfg = random_subcritical(rng);
    const double t = uniform(rng, 0.0, period(cfg));
    EXPECT_NEAR(phi_profile(cfg, t), phi_oracle(cfg, t), 1e-10 * (1.0 + phi_oracle(cfg, t)));
  }
}

TEST(PhiProfile, DerivativesAtHalfPeriod) {
  const double mid = period(kRef) / 2.0;
  const double h = 1e-5;
  const double fp = phi_profile(kRef, mid + h), f0 = phi_profile(kRef, mid), fm = phi_profile(kRef, mid - h);
  EXPECT_NEAR((fp - fm) / (2.0 * h), 0.0, 1e-6);
  EXPECT_NEAR((fp - 2.0 * f0 + fm) / (h * h), -0.176777, 1e-4);
}

TEST(Jacobian, Examples) {
  EXPECT_NEAR(jacobian(kRef, 0.0, period(kRef) / 2.0), 0.0, 1e-15);
  EXPECT_NEAR(jacobian(kRef, 1.0, period(kRef) / 4.0), 0.707107, 1e-6);
  EXPECT_EQ(jacobian(kRef, 0.0, 1.0), jacobian(kRef, 2.5, 1.0));
}

TEST(Preimages, BoundaryPointHasOne) {
  const auto pre = preimages_cover(kRef, psi(kRef, 0.0, period(kRef) / 2.0));
  ASSERT_EQ(pre.size(), 1u);
  EXPECT_NEAR(pre[0].t, period(kRef) / 2.0, 1e-6);
}

TEST(Preimages, InteriorPointHasTwoIncludingSource) {
  const double t = period(kRef) / 5.0;
  const auto pre = preimages_cover(kRef, psi(kRef, 0.3, t));
  ASSERT_EQ(pre.size(), 2u);
  const bool found = std::any_of(pre.begin(), pre.end(), [&](const TorusPoint& p) {
    return angle_gap(p.theta, 0.3) < 1e-9 && std::abs(p.t - t) < 1e-9;
  });
  EXPECT_TRUE(found);
}

TEST(Preimages, OutsideIsEmptyAndCenterThrows) {
  const HPoint y = from_disk(std::polar(std::tanh(0.5 * (radius(kRef) + 0.1)), 0.4));
  EXPECT_TRUE(preimages_cover(kRef, y).empty());
  EXPECT_EQ(error_of([] { preimages_cover(kRef, HPoint::center()); }), "degenerate center: full circle fiber");
}

TEST(Preimages, RoundTrip) {
  Rng rng{25};
  const double tp = period(kRef);
  for (int i = 0; i < 1000; ++i) {
    const double theta = uniform(rng, 0.0, 2.0 * kPi);
    double t = uniform(rng, 1e-3, tp / 2.0 - 1e-3);
    if (i % 2 == 1) t += tp / 2.0;
    const auto pre = preimages_cover(kRef, psi(kRef, theta, t));
    ASSERT_EQ(pre.size(), 2u);
    const bool found = std::any_of(pre.begin(), pre.end(), [&](const TorusPoint& p) {
      return angle_gap(p.theta, theta) < 1e-8 && std::abs(p.t - t) < 1e-8;
    });
    EXPECT_TRUE(found) << "theta=" << theta << " t=" << t;
    for (const TorusPoint& p : pre) EXPECT_LT(hyp_dist(psi(kRef, p.theta, p.t), psi(kRef, theta, t)), 1e-10);
  }
}

TEST(Density, OutsideIsZero) {
  const HPoint y = from_disk(std::polar(std::tanh(0.5 * (radius(kRef) + 0.3)), 1.0));
  const DensitySample s = density_cover(kRef, y);
  EXPECT_EQ(s.alpha_raw, 0.0);
  EXPECT_TRUE(s.preimages.empty());
  EXPECT_EQ(s.flag, DensityFlag::Outside);
}

TEST(Density, NormalizationsAgree) {
  Rng rng{26};
  for (int i = 0; i < 100; ++i) {
    const HPoint y = from_disk(std::polar(std::tanh(0.5 * uniform(rng, 0.01, 1.7)), uniform(rng, 0.0, 6.0)));
    const DensitySample s = density_cover(kRef, y);
    EXPECT_DOUBLE_EQ(s.alpha_normalized * 2.0 * kPi * period(kRef), s.alpha_raw);
  }
}

TEST(Density, MatchesClosedFormInDistance) {
  Rng rng{27};
  for (int i = 0; i < 200; ++i) {
    const MagneticConfig cfg = random_subcritical(rng);
    const double d = uniform(rng, 0.01, 0.99) * radius(cfg);
    const HPoint y = from_disk(std::polar(std::tanh(0.5 * d), uniform(rng, 0.0, 6.0)));
    const double expected = alpha_oracle(cfg, hyp_dist(HPoint::center(), y));
    EXPECT_NEAR(density_cover(cfg, y).alpha_raw, expected, 1e-8 * expected);
    EXPECT_NEAR(alpha_raw_at_distance(cfg, d), alpha_oracle(cfg, d), 1e-8 * alpha_oracle(cfg, d));
  }
}

TEST(Density, RotationallySymmetric) {
  for (double d : {0.05, 0.5, 1.2, 1.7}) {
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k < 64; ++k) {
      const double a = density_cover(kRef, from_disk(std::polar(std::tanh(0.5 * d), 2.0 * kPi * k / 64.0))).alpha_raw;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    EXPECT_LT((hi - lo) / hi, 1e-8) << "d=" << d;
  }
}

TEST(Density, ReciprocalOfFiniteDifferenceJacobian) {
  Rng rng{28};
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const HPoint y = from_disk(std::polar(std::tanh(0.5 * uniform(rng, 0.1, 1.6)), uniform(rng, 0.0, 6.0)));
    const DensitySample s = density_cover(kRef, y);
    double sum = 0.0;
    for (const TorusPoint& p : s.preimages) {
      const Complex dth = (psi(kRef, p.theta + h, p.t).z() - psi(kRef, p.theta - h, p.t).z()) / (2.0 * h);
      const Complex dt = (psi(kRef, p.theta, p.t + h).z() - psi(kRef, p.theta, p.t - h).z()) / (2.0 * h);
      const double yy = psi(kRef, p.theta, p.t).y();
      sum += yy * yy / std::abs(dth.real() * dt.imag() - dth.imag() * dt.real());
    }
    EXPECT_NEAR(s.alpha_raw, sum, 1e-4 * sum);
  }
}

TEST(Density, BandFlags) {
  const double r = radius(kRef);
  auto at = [&](double d) { return density_cover(kRef, from_disk(std::polar(std::tanh(0.5 * d), 0.2))).flag; };
  EXPECT_EQ(at(0.5e-3 * r), DensityFlag::NearCenter);
  EXPECT_EQ(at(r * (1.0 - 0.5e-3)), DensityFlag::NearBoundary);
  EXPECT_EQ(at(0.5 * r), DensityFlag::Regular);
  EXPECT_EQ(at(1.1 * r), DensityFlag::Outside);
}

TEST(Density, SingularityConstants) {
  EXPECT_NEAR(center_singularity_constant(kRef), 2.828427, 1e-6);
  EXPECT_NEAR(boundary_singularity_constant(kRef), 1.189207, 1e-6);
  const double d = 1e-6;
  EXPECT_NEAR(alpha_raw_at_distance(kRef, d) * d, 2.828427, 0.01 * 2.828427);
  const double tau = 1e-8;
  EXPECT_NEAR(alpha_raw_at_distance(kRef, radius(kRef) - tau) * std::sqrt(tau), 1.189207, 0.02 * 1.189207);
}

TEST(DensityMass, TotalIsTwoPiPeriod) {
  const double target = 2.0 * kPi * period(kRef);
  EXPECT_NEAR(target, 55.8309, 1e-4);
  EXPECT_NEAR(density_mass(kRef, 64), target, 0.01 * target);
  EXPECT_NEAR(density_mass(kRef, 256) / target, 1.0, 0.01);
  EXPECT_THROW(density_mass(kRef, 63), std::invalid_argument);
}

TEST(DensityMass, AnnulusOutsideIsZeroAndRingsAddUp) {
  const double r = radius(kRef);
  EXPECT_EQ(density_mass_annulus(kRef, r, r + 0.1, 128), 0.0);
  double rings = 0.0;
  for (int k = 0; k < 8; ++k) rings += ring_mass_exact(kRef, r * k / 8.0, r * (k + 1) / 8.0);
  EXPECT_NEAR(rings, 2.0 * kPi * period(kRef), 1e-9);
  EXPECT_NEAR(density_mass_annulus(kRef, 0.3 * r, 0.6 * r, 128), ring_mass_exact(kRef, 0.3 * r, 0.6 * r), 1e-6);
}

TEST(TorusPoint, Reduction) {
  const TorusPoint p = reduce_torus_point(kRef, {-0.5, period(kRef) * 2.5});
  EXPECT_NEAR(p.theta, 2.0 * kPi - 0.5, 1e-12);
  EXPECT_NEAR(p.t, period(kRef) * 0.5, 1e-12);
}
