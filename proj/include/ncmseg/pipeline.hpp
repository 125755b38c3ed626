#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "ncmseg/fcm.hpp"
#include "ncmseg/image.hpp"
#include "ncmseg/ncm.hpp"

namespace ncmseg {

/// Raised when a frame cannot be segmented (degenerate clustering or no
/// lumen region left after cleanup).
class PipelineError : public std::runtime_error {
 public:
  enum class Kind { DegenerateClustering, EmptyLumen };
  PipelineError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class LumenRule { DarkestCluster, CenterAdjacent };

/// Which per-pixel features are clustered.
enum class FeatureSource {
  Intensity,  // preprocessed gray value
  NsTruth,    // T map of the neutrosophic transform
  NsTruthIndeterminacy,  // (T, I) pairs
};

/// Clustering engine. Fcm swaps the baseline in for comparisons; its labels
/// carry no ambiguity or outlier class.
enum class Clusterer { Ncm, Fcm };

struct PipelineConfig {
  NcmParams ncm;
  int smooth_w = 5;
  int preprocess_w = 1;
  int catheter_radius_px = 0;
  int min_region_px = 200;
  LumenRule lumen_rule = LumenRule::DarkestCluster;
  bool merge_ambiguity = true;
  FeatureSource features = FeatureSource::Intensity;
  int ns_window = 5;
  Clusterer clusterer = Clusterer::Ncm;
  /// Fits from seeds ncm.seed, ncm.seed + 1, ... ; a converged fit with the
  /// lowest final objective wins, else the lowest objective overall.
  int restarts = 3;

  void validate() const;
};

struct PipelineResult {
  LabelMap label_map;  // after indicator smoothing
  BinaryMask lumen_mask;
  Contour contour;
  std::optional<NcmState> ncm_state;
  std::optional<FcmState> fcm_state;
  int lumen_cluster = 0;
  std::map<std::string, double> timings_ms;

  int iterations_run() const noexcept;
};

/// Min-max normalization, optional w x w mean filter, then the central
/// catheter disk is replaced by the image median. A constant image passes
/// through unnormalized.
GrayImage preprocess(const GrayImage& img, const PipelineConfig& cfg);

/// Per-label indicator maps smoothed with a w x w mean and re-assigned by
/// the highest smoothed score (lowest label on ties).
LabelMap smooth_labels(const LabelMap& labels, int w);

/// Full lumen detection for one frame. Throws PipelineError on degenerate
/// clustering or when no lumen region survives cleanup.
PipelineResult segment_lumen(const GrayImage& img, const PipelineConfig& cfg);

std::string to_string(LumenRule rule);
std::string to_string(FeatureSource source);
std::string to_string(Clusterer clusterer);
LumenRule parse_lumen_rule(const std::string& s);
FeatureSource parse_feature_source(const std::string& s);
Clusterer parse_clusterer(const std::string& s);

}  // namespace ncmseg
