#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "ncmseg/metrics.hpp"
#include "ncmseg/phantom.hpp"
#include "ncmseg/pipeline.hpp"
#include "ncmseg/regions.hpp"

using namespace ncmseg;

namespace {

PhantomSpec small_phantom(double sigma = 0.0, std::uint64_t seed = 1) {
  PhantomSpec s;
  s.size = 128;
  s.lumen_cx = s.lumen_cy = 64.0;
  s.lumen_rx = s.lumen_ry = 40.0;
  s.speckle_sigma = sigma;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Preprocess, StretchesToUnitRange) {
  GrayImage img(4, 1, {0.2, 0.45, 0.7, 0.2});
  GrayImage out = preprocess(img, PipelineConfig{});
  EXPECT_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(1, 0), 0.5);
  EXPECT_EQ(out(2, 0), 1.0);
}

TEST(Preprocess, ConstantImagePassesThrough) {
  GrayImage img(5, 5, std::vector<double>(25, 0.3));
  EXPECT_EQ(preprocess(img, PipelineConfig{}), img);
}

TEST(Preprocess, CatheterDiskTakesTheMedian) {
  RealRaster r(9, 9, 0.2);
  for (int x = 0; x < 9; ++x) r(x, 0) = 1.0;
  r(4, 4) = 0.0;
  PipelineConfig cfg;
  cfg.catheter_radius_px = 1;
  GrayImage out = preprocess(GrayImage(r), cfg);
  EXPECT_DOUBLE_EQ(out(4, 4), 0.2);
  EXPECT_DOUBLE_EQ(out(4, 3), 0.2);
  EXPECT_DOUBLE_EQ(out(3, 3), 0.2);
  EXPECT_EQ(out(4, 0), 1.0);
}

TEST(SmoothLabels, RemovesIsolatedLabels) {
  LabelMap lm{Raster<std::int32_t>(7, 7, 0), 2};
  lm.labels(3, 3) = 1;
  lm.labels(0, 0) = 3;
  LabelMap out = smooth_labels(lm, 3);
  for (auto v : out.labels.values()) EXPECT_EQ(v, 0);
  EXPECT_EQ(out.cluster_count, 2);
  LabelMap same = smooth_labels(lm, 1);
  EXPECT_EQ(same.labels, lm.labels);
}

TEST(SmoothLabels, MajorityWins) {
  // Left half 0, right half 1: at the seam column the 3x3 score is 1/3 vs 2/3.
  LabelMap lm{Raster<std::int32_t>(4, 3, 0), 2};
  for (int y = 0; y < 3; ++y) {
    lm.labels(2, y) = 1;
    lm.labels(3, y) = 1;
  }
  LabelMap out = smooth_labels(lm, 3);
  EXPECT_EQ(out.labels, lm.labels);
  LabelMap stripe{Raster<std::int32_t>(2, 1, std::vector<std::int32_t>{0, 1}), 2};
  // With replicate borders each pixel sees two of its own and one other.
  LabelMap s = smooth_labels(stripe, 3);
  EXPECT_EQ(s.labels(0, 0), 0);
  EXPECT_EQ(s.labels(1, 0), 1);
}

TEST(SegmentLumen, NoiseFreeDisk) {
  Phantom p = generate(small_phantom());
  PipelineResult r = segment_lumen(p.image, PipelineConfig{});
  EXPECT_GE(dice(r.lumen_mask, p.truth), 0.99);
  EXPECT_TRUE(r.ncm_state.has_value());
  EXPECT_FALSE(r.fcm_state.has_value());
  EXPECT_GT(r.iterations_run(), 0);
  for (const char* stage : {"preprocess", "cluster", "smooth", "cleanup", "contour"}) {
    EXPECT_EQ(r.timings_ms.count(stage), 1u) << stage;
  }
}

TEST(SegmentLumen, SpeckledDisk) {
  Phantom p = generate(small_phantom(0.15, 3));
  PipelineResult r = segment_lumen(p.image, PipelineConfig{});
  EXPECT_GE(dice(r.lumen_mask, p.truth), 0.95);
}

TEST(SegmentLumen, MaskIsOneHoleFreeComponentMatchingContour) {
  Phantom p = generate(small_phantom(0.2, 4));
  PipelineResult r = segment_lumen(p.image, PipelineConfig{});
  EXPECT_EQ(label_components(r.lumen_mask, Connectivity::Eight).sizes.size(), 1u);
  EXPECT_EQ(fill_holes(r.lumen_mask), r.lumen_mask);
  EXPECT_TRUE(r.contour.is_valid());
  EXPECT_EQ(rasterize_contour(r.contour, 128, 128), r.lumen_mask);
}

TEST(SegmentLumen, Deterministic) {
  Phantom p = generate(small_phantom(0.15, 7));
  PipelineResult a = segment_lumen(p.image, PipelineConfig{});
  PipelineResult b = segment_lumen(p.image, PipelineConfig{});
  EXPECT_EQ(a.lumen_mask, b.lumen_mask);
  EXPECT_EQ(a.contour.points, b.contour.points);
  EXPECT_EQ(a.label_map.labels, b.label_map.labels);
}

TEST(SegmentLumen, AffineIntensityChangeKeepsLabels) {
  Phantom p = generate(small_phantom(0.15, 8));
  RealRaster scaled = p.image.raster();
  for (double& v : scaled.values()) v = 0.25 + 0.5 * v;
  PipelineResult a = segment_lumen(p.image, PipelineConfig{});
  PipelineResult b = segment_lumen(GrayImage(scaled), PipelineConfig{});
  EXPECT_EQ(a.label_map.labels, b.label_map.labels);
  EXPECT_EQ(a.lumen_mask, b.lumen_mask);
}

TEST(SegmentLumen, FcmClusterer) {
  Phantom p = generate(small_phantom(0.15, 2));
  PipelineConfig cfg;
  cfg.clusterer = Clusterer::Fcm;
  PipelineResult r = segment_lumen(p.image, cfg);
  EXPECT_TRUE(r.fcm_state.has_value());
  EXPECT_GE(dice(r.lumen_mask, p.truth), 0.95);
  for (auto v : r.label_map.labels.values()) EXPECT_LT(v, cfg.ncm.c);
}

TEST(SegmentLumen, CenterAdjacentRuleWithCatheter) {
  PhantomSpec s = small_phantom(0.1, 5);
  s.catheter_r_px = 5.0;
  Phantom p = generate(s);
  PipelineConfig cfg;
  cfg.lumen_rule = LumenRule::CenterAdjacent;
  cfg.catheter_radius_px = 6;
  PipelineResult r = segment_lumen(p.image, cfg);
  EXPECT_GE(dice(r.lumen_mask, p.truth), 0.95);
}

TEST(SegmentLumen, NsFeatures) {
  Phantom p = generate(small_phantom(0.1, 6));
  for (FeatureSource f : {FeatureSource::NsTruth, FeatureSource::NsTruthIndeterminacy}) {
    PipelineConfig cfg;
    cfg.features = f;
    PipelineResult r = segment_lumen(p.image, cfg);
    EXPECT_GE(dice(r.lumen_mask, p.truth), 0.9) << to_string(f);
  }
}

TEST(SegmentLumen, ConstantImageIsDegenerate) {
  GrayImage flat(40, 40, std::vector<double>(1600, 0.5));
  for (Clusterer c : {Clusterer::Ncm, Clusterer::Fcm}) {
    PipelineConfig cfg;
    cfg.clusterer = c;
    try {
      segment_lumen(flat, cfg);
      ADD_FAILURE() << "expected PipelineError";
    } catch (const PipelineError& e) {
      EXPECT_EQ(e.kind(), PipelineError::Kind::DegenerateClustering);
    }
  }
}

TEST(SegmentLumen, SpecklesOnlyLeaveNoLumen) {
  RealRaster r(64, 64, 0.5);
  for (int y = 2; y < 64; y += 8) {
    for (int x = 2; x < 64; x += 8) {
      r(x, y) = 0.0;
      r(x + 3, y + 3) = 1.0;
    }
  }
  try {
    segment_lumen(GrayImage(r), PipelineConfig{});
    ADD_FAILURE() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.kind(), PipelineError::Kind::EmptyLumen);
  }
}

TEST(SegmentLumen, RejectsBadInput) {
  GrayImage tiny(16, 16, std::vector<double>(256, 0.5));
  EXPECT_THROW(segment_lumen(tiny, PipelineConfig{}), std::invalid_argument);
  PipelineConfig bad;
  bad.smooth_w = 4;
  EXPECT_THROW(segment_lumen(generate(small_phantom()).image, bad), std::invalid_argument);
  PipelineConfig no_fit;
  no_fit.restarts = 0;
  EXPECT_THROW(segment_lumen(generate(small_phantom()).image, no_fit), std::invalid_argument);
}

TEST(SegmentLumen, RestartsKeepTheBestFit) {
  for (std::uint64_t frame = 0; frame < 6; ++frame) {
    GrayImage img = generate(small_phantom(0.15, 40 + frame)).image;
    PipelineConfig cfg;
    cfg.restarts = 4;
    cfg.ncm.seed = 10 * frame;
    PipelineResult r = segment_lumen(img, cfg);
    Matrix features = Matrix::column(preprocess(img, cfg).raster().vec());
    std::vector<NcmState> fits;
    for (int k = 0; k < cfg.restarts; ++k) {
      NcmParams p = cfg.ncm;
      p.seed = cfg.ncm.seed + static_cast<std::uint64_t>(k);
      fits.push_back(ncm_fit(features, p));
    }
    bool any_converged = false;
    for (const auto& f : fits) any_converged = any_converged || f.converged;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& f : fits) {
      if (f.converged == any_converged) best = std::min(best, f.objective_history.back());
    }
    ASSERT_TRUE(r.ncm_state.has_value());
    EXPECT_EQ(r.ncm_state->converged, any_converged);
    EXPECT_EQ(r.ncm_state->objective_history.back(), best) << "frame " << frame;
  }
}

TEST(SegmentLumen, SingleRestartIsThePlainFit) {
  GrayImage img = generate(small_phantom(0.15, 7)).image;
  PipelineConfig cfg;
  cfg.restarts = 1;
  cfg.ncm.seed = 3;
  PipelineResult r = segment_lumen(img, cfg);
  NcmState plain = ncm_fit(Matrix::column(preprocess(img, cfg).raster().vec()), cfg.ncm);
  EXPECT_EQ(r.ncm_state->centers, plain.centers);
  EXPECT_EQ(r.ncm_state->objective_history, plain.objective_history);
}

TEST(EnumNames, RoundTrip) {
  for (auto r : {LumenRule::DarkestCluster, LumenRule::CenterAdjacent}) EXPECT_EQ(parse_lumen_rule(to_string(r)), r);
  for (auto f : {FeatureSource::Intensity, FeatureSource::NsTruth, FeatureSource::NsTruthIndeterminacy}) {
    EXPECT_EQ(parse_feature_source(to_string(f)), f);
  }
  for (auto c : {Clusterer::Ncm, Clusterer::Fcm}) EXPECT_EQ(parse_clusterer(to_string(c)), c);
  EXPECT_THROW(parse_clusterer("kmeans"), std::invalid_argument);
}
