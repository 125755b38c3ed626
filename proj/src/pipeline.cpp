#include "ncmseg/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "ncmseg/ns_transform.hpp"
#include "ncmseg/regions.hpp"

namespace ncmseg {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool in_central_disk(int x, int y, int width, int height, int radius) {
  const int dx = x - width / 2;
  const int dy = y - height / 2;
  return dx * dx + dy * dy <= radius * radius;
}

Matrix build_features(const GrayImage& img, const PipelineConfig& cfg) {
  switch (cfg.features) {
    case FeatureSource::Intensity:
      return Matrix::column(std::vector<double>(img.values().begin(), img.values().end()));
    case FeatureSource::NsTruth: {
      NsImage ns = ns_transform(img, cfg.ns_window);
      return Matrix::column(ns.t_map.vec());
    }
    case FeatureSource::NsTruthIndeterminacy: {
      NsImage ns = ns_transform(img, cfg.ns_window);
      Matrix out(ns.t_map.size(), 2);
      for (std::size_t i = 0; i < ns.t_map.size(); ++i) {
        out(i, 0) = ns.t_map.values()[i];
        out(i, 1) = ns.i_map.values()[i];
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown feature source");
}

BinaryMask label_mask(const LabelMap& labels, int label) {
  BinaryMask out(labels.labels.width(), labels.labels.height());
  auto src = labels.labels.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == label ? 1 : 0;
  return out;
}

int darkest_cluster(const Matrix& centers) {
  int best = 0;
  for (std::size_t j = 1; j < centers.rows(); ++j) {
    if (centers(j, 0) < centers(static_cast<std::size_t>(best), 0)) best = static_cast<int>(j);
  }
  return best;
}

// The determinate cluster owning the largest 8-connected region that touches
// the ring just outside the catheter disk.
int center_adjacent_cluster(const LabelMap& labels, int catheter_radius) {
  const int W = labels.labels.width();
  const int H = labels.labels.height();
  const int inner = catheter_radius;
  const int outer = catheter_radius + 3;
  int best_cluster = 0;
  std::size_t best_size = 0;
  for (int k = 0; k < labels.cluster_count; ++k) {
    ComponentLabels cc = label_components(label_mask(labels, k), Connectivity::Eight);
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const std::int32_t id = cc.labels(x, y);
        if (id == 0) continue;
        if (!in_central_disk(x, y, W, H, outer) || (inner > 0 && in_central_disk(x, y, W, H, inner))) {
          continue;
        }
        const std::size_t size = cc.sizes[static_cast<std::size_t>(id - 1)];
        if (size > best_size) {
          best_size = size;
          best_cluster = k;
        }
      }
    }
  }
  return best_cluster;
}

template <typename State>
double final_objective(const State& s) {
  return s.objective_history.empty() ? std::numeric_limits<double>::infinity() : s.objective_history.back();
}

// Converged fits beat stalled ones; then the lower final objective wins.
template <typename State>
bool better_fit(const State& a, const State& b) {
  if (a.converged != b.converged) return a.converged;
  return final_objective(a) < final_objective(b);
}

template <typename State, typename Fit>
State best_of_restarts(int restarts, std::uint64_t seed, Fit fit) {
  State best = fit(seed);
  for (int k = 1; k < restarts; ++k) {
    State next = fit(seed + static_cast<std::uint64_t>(k));
    if (better_fit(next, best)) best = std::move(next);
  }
  return best;
}

}  // namespace

void PipelineConfig::validate() const {
  ncm.validate();
  if (smooth_w < 1 || smooth_w % 2 == 0) throw std::invalid_argument("smooth_w must be odd and >= 1");
  if (preprocess_w < 1 || preprocess_w % 2 == 0) {
    throw std::invalid_argument("preprocess_w must be odd and >= 1");
  }
  if (ns_window < 1 || ns_window % 2 == 0) throw std::invalid_argument("ns_window must be odd and >= 1");
  if (catheter_radius_px < 0) throw std::invalid_argument("catheter_radius_px must be >= 0");
  if (min_region_px < 1) throw std::invalid_argument("min_region_px must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
}

int PipelineResult::iterations_run() const noexcept {
  if (ncm_state) return ncm_state->iterations_run;
  if (fcm_state) return fcm_state->iterations_run;
  return 0;
}

GrayImage preprocess(const GrayImage& img, const PipelineConfig& cfg) {
  RealRaster px = img.raster();
  auto [lo, hi] = std::minmax_element(px.values().begin(), px.values().end());
  const double min = *lo;
  const double range = *hi - *lo;
  if (range > 0.0) {
    for (double& v : px.values()) v = std::clamp((v - min) / range, 0.0, 1.0);
  }
  if (cfg.preprocess_w > 1) {
    px = box_mean(px, cfg.preprocess_w);
    for (double& v : px.values()) v = std::clamp(v, 0.0, 1.0);
  }
  if (cfg.catheter_radius_px > 0) {
    std::vector<double> sorted = px.vec();
    auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    const double median = *mid;
    for (int y = 0; y < px.height(); ++y) {
      for (int x = 0; x < px.width(); ++x) {
        if (in_central_disk(x, y, px.width(), px.height(), cfg.catheter_radius_px)) px(x, y) = median;
      }
    }
  }
  return GrayImage(std::move(px), img.spacing_mm());
}

LabelMap smooth_labels(const LabelMap& labels, int w) {
  if (w == 1) return labels;
  const int W = labels.labels.width();
  const int H = labels.labels.height();
  const int label_count = labels.cluster_count + 2;
  RealRaster best_score(W, H, -1.0);
  LabelMap out{Raster<std::int32_t>(W, H), labels.cluster_count};
  for (int k = 0; k < label_count; ++k) {
    RealRaster indicator(W, H);
    auto src = labels.labels.values();
    auto dst = indicator.values();
    bool present = false;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = src[i] == k ? 1.0 : 0.0;
      present = present || src[i] == k;
    }
    if (!present) continue;
    RealRaster score = box_mean(indicator, w);
    auto s = score.values();
    auto best = best_score.values();
    auto lab = out.labels.values();
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] > best[i]) {
        best[i] = s[i];
        lab[i] = k;
      }
    }
  }
  return out;
}

PipelineResult segment_lumen(const GrayImage& img, const PipelineConfig& cfg) {
  cfg.validate();
  if (img.width() < 32 || img.height() < 32) {
    throw std::invalid_argument("segment_lumen: image must be at least 32x32");
  }
  PipelineResult result;
  const int W = img.width();
  const int H = img.height();

  auto t0 = Clock::now();
  GrayImage pre = preprocess(img, cfg);
  result.timings_ms["preprocess"] = elapsed_ms(t0);

  t0 = Clock::now();
  Matrix features = build_features(pre, cfg);
  const int c = cfg.ncm.c;
  std::vector<int> raw_labels;
  Matrix centers;
  if (cfg.clusterer == Clusterer::Ncm) {
    NcmState state = best_of_restarts<NcmState>(cfg.restarts, cfg.ncm.seed, [&](std::uint64_t seed) {
      NcmParams p = cfg.ncm;
      p.seed = seed;
      return ncm_fit(features, p);
    });
    if (state.degenerate) {
      throw PipelineError(PipelineError::Kind::DegenerateClustering,
                          "clustering is degenerate: all pixels identical");
    }
    raw_labels = ncm_assign(state);
    centers = state.centers;
    result.ncm_state = std::move(state);
  } else {
    FcmParams fp{c, cfg.ncm.m, cfg.ncm.epsilon, cfg.ncm.max_iter, cfg.ncm.seed};
    const auto& v = features.values();
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
      throw PipelineError(PipelineError::Kind::DegenerateClustering,
                          "clustering is degenerate: all pixels identical");
    }
    FcmState state = best_of_restarts<FcmState>(cfg.restarts, fp.seed, [&](std::uint64_t seed) {
      FcmParams p = fp;
      p.seed = seed;
      return fcm_fit(features, p);
    });
    raw_labels = fcm_assign(state);
    centers = state.centers;
    result.fcm_state = std::move(state);
  }
  result.timings_ms["cluster"] = elapsed_ms(t0);

  t0 = Clock::now();
  LabelMap labels{Raster<std::int32_t>(W, H, std::vector<std::int32_t>(raw_labels.begin(), raw_labels.end())), c};
  result.label_map = smooth_labels(labels, cfg.smooth_w);
  result.timings_ms["smooth"] = elapsed_ms(t0);

  t0 = Clock::now();
  result.lumen_cluster = cfg.lumen_rule == LumenRule::DarkestCluster
                             ? darkest_cluster(centers)
                             : center_adjacent_cluster(result.label_map, cfg.catheter_radius_px);
  BinaryMask region = label_mask(result.label_map, result.lumen_cluster);
  region = remove_small_components(region, static_cast<std::size_t>(cfg.min_region_px));
  region = largest_component(region);
  if (count_foreground(region) == 0) {
    throw PipelineError(PipelineError::Kind::EmptyLumen, "no lumen region survived cleanup");
  }
  if (cfg.merge_ambiguity && cfg.clusterer == Clusterer::Ncm) {
    BinaryMask ambiguous = label_mask(result.label_map, result.label_map.ambiguity_label());
    BinaryMask extra = adjacent_pixels(region, ambiguous);
    auto r = region.values();
    auto e = extra.values();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] || e[i];
  }
  result.lumen_mask = fill_holes(region);
  result.timings_ms["cleanup"] = elapsed_ms(t0);

  t0 = Clock::now();
  result.contour = trace_boundary(result.lumen_mask);
  result.timings_ms["contour"] = elapsed_ms(t0);
  return result;
}

std::string to_string(LumenRule rule) {
  return rule == LumenRule::DarkestCluster ? "darkest-cluster" : "center-adjacent";
}

std::string to_string(FeatureSource source) {
  switch (source) {
    case FeatureSource::Intensity: return "intensity";
    case FeatureSource::NsTruth: return "ns-t";
    case FeatureSource::NsTruthIndeterminacy: return "ns-ti";
  }
  return "intensity";
}

std::string to_string(Clusterer clusterer) { return clusterer == Clusterer::Ncm ? "ncm" : "fcm"; }

LumenRule parse_lumen_rule(const std::string& s) {
  if (s == "darkest-cluster") return LumenRule::DarkestCluster;
  if (s == "center-adjacent") return LumenRule::CenterAdjacent;
  throw std::invalid_argument("unknown lumen_rule: " + s);
}

FeatureSource parse_feature_source(const std::string& s) {
  if (s == "intensity") return FeatureSource::Intensity;
  if (s == "ns-t") return FeatureSource::NsTruth;
  if (s == "ns-ti") return FeatureSource::NsTruthIndeterminacy;
  throw std::invalid_argument("unknown features: " + s);
}

Clusterer parse_clusterer(const std::string& s) {
  if (s == "ncm") return Clusterer::Ncm;
  if (s == "fcm") return Clusterer::Fcm;
  throw std::invalid_argument("unknown clusterer: " + s);
}

}  // namespace ncmseg
