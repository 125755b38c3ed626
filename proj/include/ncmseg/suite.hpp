#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ncmseg/metrics.hpp"
#include "ncmseg/pipeline.hpp"

namespace ncmseg {

/// Runs fn(0) .. fn(n-1) on up to `jobs` worker threads. Exceptions from fn
/// are captured and the first one is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// One frame with its reference segmentation.
struct LabeledFrame {
  std::string name;
  GrayImage image;
  BinaryMask truth;
};

struct FrameOutcome {
  std::string name;
  bool ok = false;
  std::string error;
  MetricsReport metrics;
  int iterations_run = 0;
  double wall_ms = 0.0;
};

/// Segments every frame and scores it against its truth mask. Frames whose
/// segmentation or scoring fails are reported with ok = false.
std::vector<FrameOutcome> run_suite(const std::vector<LabeledFrame>& frames, const PipelineConfig& cfg,
                                    double spacing_mm = 1.0, int jobs = 1);

struct MetricSummary {
  std::array<double, 10> mean{};
  std::array<double, 10> stddev{};  // sample standard deviation (n - 1)
  std::size_t count = 0;            // frames included
  std::size_t failures = 0;
  double mean_wall_ms = 0.0;

  double mean_of(std::string_view field) const;
  double stddev_of(std::string_view field) const;
};

/// Mean and spread over successful frames; failures are counted only.
MetricSummary summarize(const std::vector<FrameOutcome>& outcomes);

}  // namespace ncmseg
