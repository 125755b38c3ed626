#include <gtest/gtest.h>

#include <random>

#include "ncmseg/ns_transform.hpp"

using namespace ncmseg;

TEST(LocalMean, ConstantAndIdentity) {
  GrayImage flat(5, 4, std::vector<double>(20, 0.6));
  RealRaster m = local_mean(flat, 3);
  for (double v : m.values()) EXPECT_EQ(v, 0.6);
  GrayImage img(3, 1, {0.1, 0.7, 0.3});
  EXPECT_EQ(local_mean(img, 1), img.raster());
  EXPECT_THROW(local_mean(img, 4), std::invalid_argument);
}

TEST(LocalMean, CheckerboardCenter) {
  RealRaster r(3, 3);
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 3; ++x) r(x, y) = (x + y) % 2 == 0 ? 1.0 : 0.0;
  }
  EXPECT_NEAR(local_mean(GrayImage(r), 3)(1, 1), 5.0 / 9.0, 1e-15);
}

TEST(NsTransform, ConstantImage) {
  GrayImage flat(6, 6, std::vector<double>(36, 0.25));
  NsImage ns = ns_transform(flat, 5);
  EXPECT_EQ(ns.window_w, 5);
  for (std::size_t k = 0; k < 36; ++k) {
    EXPECT_EQ(ns.t_map.values()[k], 0.5);
    EXPECT_EQ(ns.i_map.values()[k], 0.0);
    EXPECT_EQ(ns.f_map.values()[k], 0.5);
  }
}

TEST(NsTransform, ExtremesOfLocalMeanAndDeviation) {
  RealRaster r(5, 1, std::vector<double>{0.0, 0.0, 0.2, 0.9, 1.0});
  GrayImage img(r);
  NsImage ns = ns_transform(img, 3);
  RealRaster gbar = local_mean(img, 3);
  auto [lo, hi] = std::minmax_element(gbar.values().begin(), gbar.values().end());
  const auto xmax = static_cast<int>(hi - gbar.values().begin());
  const auto xmin = static_cast<int>(lo - gbar.values().begin());
  EXPECT_EQ(ns.t_map(xmax, 0), 1.0);
  EXPECT_EQ(ns.f_map(xmax, 0), 0.0);
  EXPECT_EQ(ns.t_map(xmin, 0), 0.0);
  // Pixel 0 has the smallest deviation |g - gbar| = 0.
  EXPECT_EQ(ns.i_map(0, 0), 0.0);
  double imax = 0.0;
  for (double v : ns.i_map.values()) imax = std::max(imax, v);
  EXPECT_EQ(imax, 1.0);
}

TEST(NsTransform, MatchesDefinitionOnRandomImage) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealRaster r(8, 7);
  for (double& v : r.values()) v = u(rng);
  GrayImage img(r);
  NsImage ns = ns_transform(img, 3);
  RealRaster gbar = local_mean(img, 3);
  auto [glo, ghi] = std::minmax_element(gbar.values().begin(), gbar.values().end());
  std::vector<double> dev;
  for (std::size_t k = 0; k < r.size(); ++k) dev.push_back(std::abs(r.values()[k] - gbar.values()[k]));
  auto [dlo, dhi] = std::minmax_element(dev.begin(), dev.end());
  for (std::size_t k = 0; k < r.size(); ++k) {
    EXPECT_NEAR(ns.t_map.values()[k], (gbar.values()[k] - *glo) / (*ghi - *glo), 1e-14);
    EXPECT_NEAR(ns.i_map.values()[k], (dev[k] - *dlo) / (*dhi - *dlo), 1e-14);
    EXPECT_EQ(ns.f_map.values()[k], 1.0 - ns.t_map.values()[k]);
  }
}

TEST(NsTransform, InvariantsOnRandomImages) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    RealRaster r(3 + k % 10, 3 + k % 7);
    for (double& v : r.values()) v = u(rng);
    NsImage ns = ns_transform(GrayImage(r), 1 + 2 * (k % 3));
    ASSERT_EQ(ns.t_map.width(), r.width());
    ASSERT_EQ(ns.i_map.height(), r.height());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double t = ns.t_map.values()[i];
      EXPECT_GE(t, 0.0);
      EXPECT_LE(t, 1.0);
      EXPECT_GE(ns.i_map.values()[i], 0.0);
      EXPECT_LE(ns.i_map.values()[i], 1.0);
      EXPECT_EQ(ns.f_map.values()[i], 1.0 - t);
    }
  }
}

TEST(NsTransform, WidthOneHasZeroIndeterminacy) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealRaster r(6, 6);
  for (double& v : r.values()) v = u(rng);
  NsImage ns = ns_transform(GrayImage(r), 1);
  for (double v : ns.i_map.values()) EXPECT_EQ(v, 0.0);
}
