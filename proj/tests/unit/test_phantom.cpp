#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ncmseg/phantom.hpp"
#include "oracles.hpp"

using namespace ncmseg;

TEST(Phantom, NoiseFreeIsPiecewiseConstant) {
  PhantomSpec s;
  Phantom p = generate(s);
  std::set<double> levels(p.image.values().begin(), p.image.values().end());
  EXPECT_EQ(levels, (std::set<double>{s.lumen_intensity, s.background_intensity, s.wall_intensity}));
  for (int y = 0; y < s.size; ++y) {
    for (int x = 0; x < s.size; ++x) {
      EXPECT_EQ(p.truth(x, y) != 0, p.image(x, y) == s.lumen_intensity);
    }
  }
}

TEST(Phantom, DiskAreaMatchesCount) {
  PhantomSpec s;
  s.lumen_rx = s.lumen_ry = 40.0;
  Phantom p = generate(s);
  std::size_t expected = 0;
  for (int y = 0; y < s.size; ++y) {
    for (int x = 0; x < s.size; ++x) {
      const double dx = x - 128.0, dy = y - 128.0;
      if (dx * dx + dy * dy <= 1600.0) ++expected;
    }
  }
  EXPECT_EQ(oracle::count(p.truth), expected);
  EXPECT_NEAR(static_cast<double>(expected), M_PI * 1600.0, 0.01 * M_PI * 1600.0);
}

TEST(Phantom, WallRing) {
  PhantomSpec s;
  Phantom p = generate(s);
  EXPECT_EQ(p.image(128 + 48 + 10, 128), s.wall_intensity);
  EXPECT_EQ(p.image(128 + 48 + 21, 128), s.background_intensity);
  EXPECT_EQ(p.image(128, 128 - 47), s.lumen_intensity);
}

TEST(Phantom, SpeckleIsSeededAndClamped) {
  PhantomSpec s;
  s.speckle_sigma = 0.4;
  s.seed = 5;
  Phantom a = generate(s);
  Phantom b = generate(s);
  EXPECT_EQ(a.image, b.image);
  for (double v : a.image.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  s.seed = 6;
  EXPECT_NE(generate(s).image, a.image);
  EXPECT_EQ(generate(s).truth, a.truth);
}

TEST(Phantom, RotatedEllipse) {
  PhantomSpec s;
  s.lumen_rx = 50.0;
  s.lumen_ry = 25.0;
  s.lumen_angle_deg = 90.0;
  Phantom p = generate(s);
  // Rotated by 90 degrees the long axis is vertical.
  EXPECT_TRUE(p.truth(128, 128 + 45));
  EXPECT_FALSE(p.truth(128 + 45, 128));
  for (int y = 0; y < s.size; y += 7) {
    for (int x = 0; x < s.size; x += 7) EXPECT_EQ(p.truth(x, y) != 0, in_lumen(s, x, y));
  }
}

TEST(Phantom, GuidewireAndCatheter) {
  PhantomSpec s;
  s.guidewire_angle_deg = 0.0;
  s.catheter_r_px = 6.0;
  Phantom p = generate(s);
  EXPECT_EQ(p.image(128 + 60, 128), kGuidewireShadowIntensity);
  EXPECT_EQ(p.image(128 + 100, 128), kGuidewireShadowIntensity);
  EXPECT_EQ(p.image(128 - 60, 128), s.wall_intensity);
  EXPECT_EQ(p.image(128, 128), kCatheterIntensity);
  EXPECT_EQ(p.image(128 + 20, 128), s.lumen_intensity);
  // The truth mask is unaffected by either artefact.
  PhantomSpec plain;
  EXPECT_EQ(p.truth, generate(plain).truth);
}

TEST(Phantom, ValidationErrors) {
  auto bad = [](auto mutate) {
    PhantomSpec s;
    mutate(s);
    return s;
  };
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.lumen_rx = 0.0; })), std::invalid_argument);
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.lumen_cx = 30.0; })), std::invalid_argument);
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.wall_intensity = 1.2; })), std::invalid_argument);
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.speckle_sigma = -0.1; })), std::invalid_argument);
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.size = 4; })), std::invalid_argument);
  EXPECT_THROW(generate(bad([](PhantomSpec& s) { s.catheter_r_px = 0.0; })), std::invalid_argument);
}

TEST(PhantomSuite, SingleUnjitteredMemberEqualsBase) {
  PhantomSpec base = default_suite_base(0.15, 9);
  auto suite = generate_suite(1, base, PhantomJitter{});
  ASSERT_EQ(suite.size(), 1u);
  Phantom direct = generate(base);
  EXPECT_EQ(suite[0].image, direct.image);
  EXPECT_EQ(suite[0].truth, direct.truth);
  EXPECT_EQ(suite[0].spec, base);
}

TEST(PhantomSuite, ReproducibleAndVaried) {
  auto a = generate_suite(6, default_suite_base(0.15), default_suite_jitter());
  auto b = generate_suite(6, default_suite_base(0.15), default_suite_jitter());
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].spec, b[k].spec);
    EXPECT_EQ(a[k].image, b[k].image);
    EXPECT_EQ(a[k].spec.seed, 2024u + k);
  }
  EXPECT_NE(a[0].spec.lumen_cx, a[1].spec.lumen_cx);
  EXPECT_THROW(generate_suite(0, PhantomSpec{}, PhantomJitter{}), std::invalid_argument);
}

TEST(PhantomSuite, DefaultSuiteFitsTheFrame) {
  auto suite = generate_suite(kDefaultSuiteSize, default_suite_base(0.0), default_suite_jitter());
  EXPECT_EQ(suite.size(), static_cast<std::size_t>(kDefaultSuiteSize));
  for (const auto& p : suite) EXPECT_NO_THROW(p.spec.validate());
}
