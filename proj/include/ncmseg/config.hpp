#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ncmseg/metrics.hpp"
#include "ncmseg/phantom.hpp"
#include "ncmseg/pipeline.hpp"

namespace ncmseg {

/// Malformed or inconsistent configuration (unknown key, wrong type,
/// out-of-range value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a CLI run needs. Serialized as nested JSON:
///   {"ncm": {...}, "pipeline": {...}, "spacing_mm": x|null,
///    "input": "...", "output": "...", "jobs": n}
struct RunConfig {
  PipelineConfig pipeline;
  /// Overrides per-image sidecar spacing when set.
  std::optional<double> spacing_mm;
  std::string input;
  std::string output;
  int jobs = 1;
};

nlohmann::json to_json(const NcmParams& p);
NcmParams ncm_params_from_json(const nlohmann::json& j, NcmParams defaults = {});

nlohmann::json to_json(const PipelineConfig& cfg);  // pipeline keys only
nlohmann::json to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys throw ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const PhantomSpec& s);
PhantomSpec phantom_spec_from_json(const nlohmann::json& j, PhantomSpec defaults = {});
nlohmann::json to_json(const PhantomJitter& j);
PhantomJitter phantom_jitter_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MetricsReport& r);

/// Stable text form: two-space indent and trailing newline.
std::string dump(const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ncmseg
