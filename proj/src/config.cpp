#include "ncmseg/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace ncmseg {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": wrong type for '" + key + "'");
  }
}

void read_optional(const json& j, const char* key, std::optional<double>& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else if (j.at(key).is_number()) {
    out = j.at(key).get<double>();
  } else {
    throw ConfigError(where + ": wrong type for '" + key + "'");
  }
}

template <typename Fn>
auto checked(Fn&& fn, const std::string& where) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json to_json(const NcmParams& p) {
  return json{{"c", p.c},       {"m", p.m},
              {"w1", p.w1},     {"w2", p.w2},
              {"w3", p.w3},     {"delta_reg", p.delta_reg},
              {"epsilon", p.epsilon}, {"max_iter", p.max_iter},
              {"seed", p.seed}};
}

NcmParams ncm_params_from_json(const json& j, NcmParams p) {
  const std::string where = "ncm";
  require_object(j, where);
  reject_unknown(j, {"c", "m", "w1", "w2", "w3", "delta_reg", "epsilon", "max_iter", "seed"}, where);
  read(j, "c", p.c, where);
  read(j, "m", p.m, where);
  read(j, "w1", p.w1, where);
  read(j, "w2", p.w2, where);
  read(j, "w3", p.w3, where);
  read(j, "delta_reg", p.delta_reg, where);
  read(j, "epsilon", p.epsilon, where);
  read(j, "max_iter", p.max_iter, where);
  read(j, "seed", p.seed, where);
  checked([&] { p.validate(); return 0; }, where);
  return p.normalized();
}

json to_json(const PipelineConfig& cfg) {
  return json{{"smooth_w", cfg.smooth_w},
              {"preprocess_w", cfg.preprocess_w},
              {"catheter_radius_px", cfg.catheter_radius_px},
              {"min_region_px", cfg.min_region_px},
              {"lumen_rule", to_string(cfg.lumen_rule)},
              {"merge_ambiguity", cfg.merge_ambiguity},
              {"features", to_string(cfg.features)},
              {"ns_window", cfg.ns_window},
              {"clusterer", to_string(cfg.clusterer)},
              {"restarts", cfg.restarts}};
}

json to_json(const RunConfig& cfg) {
  return json{{"ncm", to_json(cfg.pipeline.ncm)},
              {"pipeline", to_json(cfg.pipeline)},
              {"spacing_mm", optional_number(cfg.spacing_mm)},
              {"input", cfg.input},
              {"output", cfg.output},
              {"jobs", cfg.jobs}};
}

RunConfig run_config_from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, {"ncm", "pipeline", "spacing_mm", "input", "output", "jobs"}, "config");
  RunConfig cfg;
  cfg.pipeline.ncm = cfg.pipeline.ncm.normalized();
  if (j.contains("ncm")) cfg.pipeline.ncm = ncm_params_from_json(j.at("ncm"));
  if (j.contains("pipeline")) {
    const json& p = j.at("pipeline");
    const std::string where = "pipeline";
    require_object(p, where);
    reject_unknown(p,
                   {"smooth_w", "preprocess_w", "catheter_radius_px", "min_region_px", "lumen_rule",
                    "merge_ambiguity", "features", "ns_window", "clusterer", "restarts"},
                   where);
    PipelineConfig& pc = cfg.pipeline;
    read(p, "smooth_w", pc.smooth_w, where);
    read(p, "preprocess_w", pc.preprocess_w, where);
    read(p, "catheter_radius_px", pc.catheter_radius_px, where);
    read(p, "min_region_px", pc.min_region_px, where);
    read(p, "merge_ambiguity", pc.merge_ambiguity, where);
    read(p, "ns_window", pc.ns_window, where);
    read(p, "restarts", pc.restarts, where);
    std::string text;
    if (p.contains("lumen_rule")) {
      read(p, "lumen_rule", text, where);
      pc.lumen_rule = checked([&] { return parse_lumen_rule(text); }, where);
    }
    if (p.contains("features")) {
      read(p, "features", text, where);
      pc.features = checked([&] { return parse_feature_source(text); }, where);
    }
    if (p.contains("clusterer")) {
      read(p, "clusterer", text, where);
      pc.clusterer = checked([&] { return parse_clusterer(text); }, where);
    }
  }
  read_optional(j, "spacing_mm", cfg.spacing_mm, "config");
  read(j, "input", cfg.input, "config");
  read(j, "output", cfg.output, "config");
  read(j, "jobs", cfg.jobs, "config");
  if (cfg.spacing_mm && !(*cfg.spacing_mm > 0.0)) throw ConfigError("config: spacing_mm must be > 0");
  if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
  checked([&] { cfg.pipeline.validate(); return 0; }, "pipeline");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path));
}

json to_json(const PhantomSpec& s) {
  json lumen_r = s.is_circle() && s.lumen_angle_deg == 0.0
                     ? json(s.lumen_rx)
                     : json::array({s.lumen_rx, s.lumen_ry, s.lumen_angle_deg});
  return json{{"size", s.size},
              {"lumen_cx", s.lumen_cx},
              {"lumen_cy", s.lumen_cy},
              {"lumen_r", lumen_r},
              {"lumen_intensity", s.lumen_intensity},
              {"wall_thickness_px", s.wall_thickness_px},
              {"wall_intensity", s.wall_intensity},
              {"background_intensity", s.background_intensity},
              {"speckle_sigma", s.speckle_sigma},
              {"guidewire_angle_deg", optional_number(s.guidewire_angle_deg)},
              {"guidewire_width_deg", s.guidewire_width_deg},
              {"catheter_r_px", optional_number(s.catheter_r_px)},
              {"seed", s.seed}};
}

PhantomSpec phantom_spec_from_json(const json& j, PhantomSpec s) {
  const std::string where = "phantom";
  require_object(j, where);
  reject_unknown(j,
                 {"size", "lumen_cx", "lumen_cy", "lumen_r", "lumen_intensity", "wall_thickness_px",
                  "wall_intensity", "background_intensity", "speckle_sigma", "guidewire_angle_deg",
                  "guidewire_width_deg", "catheter_r_px", "seed", "jitter"},
                 where);
  const bool had_center = j.contains("lumen_cx") || j.contains("lumen_cy");
  read(j, "size", s.size, where);
  if (!had_center) {
    s.lumen_cx = static_cast<double>(s.size / 2);
    s.lumen_cy = static_cast<double>(s.size / 2);
  }
  read(j, "lumen_cx", s.lumen_cx, where);
  read(j, "lumen_cy", s.lumen_cy, where);
  if (j.contains("lumen_r")) {
    const json& r = j.at("lumen_r");
    if (r.is_number()) {
      s.lumen_rx = s.lumen_ry = r.get<double>();
      s.lumen_angle_deg = 0.0;
    } else if (r.is_array() && r.size() == 3 && r[0].is_number() && r[1].is_number() && r[2].is_number()) {
      s.lumen_rx = r[0].get<double>();
      s.lumen_ry = r[1].get<double>();
      s.lumen_angle_deg = r[2].get<double>();
    } else {
      throw ConfigError(where + ": lumen_r must be a number or [rx, ry, angle_deg]");
    }
  }
  read(j, "lumen_intensity", s.lumen_intensity, where);
  read(j, "wall_thickness_px", s.wall_thickness_px, where);
  read(j, "wall_intensity", s.wall_intensity, where);
  read(j, "background_intensity", s.background_intensity, where);
  read(j, "speckle_sigma", s.speckle_sigma, where);
  read_optional(j, "guidewire_angle_deg", s.guidewire_angle_deg, where);
  read(j, "guidewire_width_deg", s.guidewire_width_deg, where);
  read_optional(j, "catheter_r_px", s.catheter_r_px, where);
  read(j, "seed", s.seed, where);
  checked([&] { s.validate(); return 0; }, where);
  return s;
}

json to_json(const PhantomJitter& j) {
  return json{{"center_px", j.center_px},
              {"radius_px", j.radius_px},
              {"aspect", j.aspect},
              {"speckle_sigma", j.speckle_sigma}};
}

PhantomJitter phantom_jitter_from_json(const json& j) {
  const std::string where = "jitter";
  require_object(j, where);
  reject_unknown(j, {"center_px", "radius_px", "aspect", "speckle_sigma"}, where);
  PhantomJitter out;
  read(j, "center_px", out.center_px, where);
  read(j, "radius_px", out.radius_px, where);
  read(j, "aspect", out.aspect, where);
  read(j, "speckle_sigma", out.speckle_sigma, where);
  if (out.center_px < 0 || out.radius_px < 0 || out.aspect < 0 || out.speckle_sigma < 0) {
    throw ConfigError(where + ": jitter half-widths must be >= 0");
  }
  return out;
}

json to_json(const MetricsReport& r) {
  json out = json::object();
  auto values = r.as_array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    out[std::string(MetricsReport::kFieldNames[k])] = values[k];
  }
  return out;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + path.string());
  return j;
}

}  // namespace ncmseg
