#include "ncmseg/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ncmseg {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < std::min(workers, n); ++k) pool.emplace_back(work);
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<FrameOutcome> run_suite(const std::vector<LabeledFrame>& frames, const PipelineConfig& cfg,
                                    double spacing_mm, int jobs) {
  std::vector<FrameOutcome> out(frames.size());
  parallel_for(frames.size(), jobs, [&](std::size_t k) {
    const LabeledFrame& frame = frames[k];
    FrameOutcome& o = out[k];
    o.name = frame.name;
    const auto start = std::chrono::steady_clock::now();
    try {
      PipelineResult r = segment_lumen(frame.image, cfg);
      o.iterations_run = r.iterations_run();
      o.metrics = evaluate(r.lumen_mask, frame.truth, spacing_mm);
      o.ok = true;
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    o.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  return out;
}

namespace {

std::size_t field_index(std::string_view field) {
  const auto& names = MetricsReport::kFieldNames;
  auto it = std::find(names.begin(), names.end(), field);
  if (it == names.end()) throw std::invalid_argument("unknown metric field");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

double MetricSummary::mean_of(std::string_view field) const { return mean[field_index(field)]; }
double MetricSummary::stddev_of(std::string_view field) const { return stddev[field_index(field)]; }

MetricSummary summarize(const std::vector<FrameOutcome>& outcomes) {
  MetricSummary s;
  double wall = 0.0;
  for (const auto& o : outcomes) {
    wall += o.wall_ms;
    if (!o.ok) {
      ++s.failures;
      continue;
    }
    ++s.count;
    auto v = o.metrics.as_array();
    for (std::size_t k = 0; k < v.size(); ++k) s.mean[k] += v[k];
  }
  if (!outcomes.empty()) s.mean_wall_ms = wall / static_cast<double>(outcomes.size());
  if (s.count == 0) {
    s.mean.fill(std::nan(""));
    s.stddev.fill(std::nan(""));
    return s;
  }
  for (double& m : s.mean) m /= static_cast<double>(s.count);
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    auto v = o.metrics.as_array();
    for (std::size_t k = 0; k < v.size(); ++k) s.stddev[k] += (v[k] - s.mean[k]) * (v[k] - s.mean[k]);
  }
  for (double& sd : s.stddev) {
    sd = s.count > 1 ? std::sqrt(sd / static_cast<double>(s.count - 1)) : 0.0;
  }
  return s;
}

}  // namespace ncmseg
