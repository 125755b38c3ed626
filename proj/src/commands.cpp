#include "ncmseg/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "ncmseg/metrics.hpp"
#include "ncmseg/ns_transform.hpp"
#include "ncmseg/suite.hpp"

namespace ncmseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".png";
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::string number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string frame_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%03d", k);
  return buf;
}

RealRaster overlay(const GrayImage& img, const Contour& contour) {
  RealRaster out = img.raster();
  for (const auto& p : contour.points) {
    const int x = static_cast<int>(p.x);
    const int y = static_cast<int>(p.y);
    if (out.contains(x, y)) out(x, y) = 1.0;
  }
  return out;
}

// Pairs files of two directories by stem.
std::vector<std::pair<fs::path, fs::path>> pair_by_stem(const fs::path& a_dir, const fs::path& b_dir) {
  std::map<std::string, fs::path> a;
  std::map<std::string, fs::path> b;
  for (const auto& p : list_images(a_dir)) a[p.stem().string()] = p;
  for (const auto& p : list_images(b_dir)) b[p.stem().string()] = p;
  std::vector<std::string> missing;
  for (const auto& [stem, _] : a) {
    if (!b.count(stem)) missing.push_back(stem + " (only in " + a_dir.string() + ")");
  }
  for (const auto& [stem, _] : b) {
    if (!a.count(stem)) missing.push_back(stem + " (only in " + b_dir.string() + ")");
  }
  if (!missing.empty()) {
    std::string msg = "unmatched file names:";
    for (const auto& m : missing) msg += " " + m;
    throw UsageError(msg);
  }
  std::vector<std::pair<fs::path, fs::path>> out;
  for (const auto& [stem, path] : a) out.emplace_back(path, b.at(stem));
  return out;
}

json summary_json(const MetricSummary& s) {
  json mean = json::object();
  json sd = json::object();
  for (std::size_t k = 0; k < MetricsReport::kFieldNames.size(); ++k) {
    const std::string name(MetricsReport::kFieldNames[k]);
    mean[name] = s.count ? json(s.mean[k]) : json(nullptr);
    sd[name] = s.count ? json(s.stddev[k]) : json(nullptr);
  }
  return json{{"frames", s.count}, {"failures", s.failures}, {"mean", mean}, {"std", sd}};
}

std::string mean_pm_std(const MetricSummary& s, std::string_view field) {
  if (s.count == 0) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << s.mean_of(field) << " +- " << s.stddev_of(field);
  return os.str();
}

}  // namespace

std::vector<fs::path> list_images(const fs::path& input) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) return {input};
  if (!fs::is_directory(input, ec)) throw UsageError("no such file or directory: " + input.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(input)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- segment -----------------------------------------------------------------

int cmd_segment(const SegmentOptions& opts, std::ostream& log) {
  const RunConfig& cfg = opts.config;
  if (cfg.input.empty()) throw UsageError("segment: no input given");
  if (cfg.output.empty()) throw UsageError("segment: no output directory given");
  cfg.pipeline.validate();
  const std::vector<fs::path> inputs = list_images(cfg.input);
  if (inputs.empty()) throw UsageError("segment: no .pgm or .png files in " + cfg.input);

  const fs::path out(cfg.output);
  for (const char* sub : {"masks", "contours", "overlays"}) make_dirs(out / sub);
  if (opts.dump_ns) make_dirs(out / "ns");

  std::vector<json> entries(inputs.size());
  parallel_for(inputs.size(), cfg.jobs, [&](std::size_t k) {
    const fs::path& path = inputs[k];
    const std::string stem = path.stem().string();
    json entry{{"name", stem}, {"input", path.filename().string()}};
    try {
      GrayImage img = read_gray_image(path);
      if (cfg.spacing_mm) img = GrayImage(img.raster(), *cfg.spacing_mm);
      PipelineResult r = segment_lumen(img, cfg.pipeline);
      write_mask(r.lumen_mask, out / "masks" / (stem + ".pgm"));
      write_contour_csv(r.contour, out / "contours" / (stem + ".csv"));
      write_gray_png(overlay(img, r.contour), out / "overlays" / (stem + ".png"));
      if (opts.dump_ns) {
        NsImage ns = ns_transform(img, cfg.pipeline.ns_window);
        write_gray_pgm(ns.t_map, out / "ns" / (stem + "_t.pgm"));
        write_gray_pgm(ns.i_map, out / "ns" / (stem + "_i.pgm"));
        write_gray_pgm(ns.f_map, out / "ns" / (stem + "_f.pgm"));
      }
      entry["status"] = "ok";
      entry["spacing_mm"] = img.spacing_mm();
      entry["iterations_run"] = r.iterations_run();
      entry["converged"] = r.ncm_state ? r.ncm_state->converged : r.fcm_state->converged;
      entry["lumen_cluster"] = r.lumen_cluster;
      entry["lumen_area_px"] = count_foreground(r.lumen_mask);
      entry["contour_points"] = r.contour.size();
      if (opts.timings) entry["timings_ms"] = r.timings_ms;
    } catch (const std::exception& e) {
      entry["status"] = "error";
      entry["error"] = e.what();
    }
    entries[k] = std::move(entry);
  });

  std::size_t failed = 0;
  for (const auto& e : entries) {
    if (e["status"] != "ok") {
      ++failed;
      log << "segment: " << e["input"].get<std::string>() << ": " << e["error"].get<std::string>() << "\n";
    }
  }
  json manifest{{"config", to_json(cfg)},
                {"frames", entries},
                {"summary", {{"total", entries.size()}, {"ok", entries.size() - failed}, {"failed", failed}}}};
  write_file_atomic(out / "manifest.json", dump(manifest));
  log << "segment: " << entries.size() - failed << "/" << entries.size() << " frames ok\n";
  return failed ? kExitPartialFailure : kExitOk;
}

// --- evaluate ----------------------------------------------------------------

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log) {
  if (opts.out_csv.empty()) throw UsageError("evaluate: no output CSV given");
  if (opts.spacing_mm && !(*opts.spacing_mm > 0.0)) throw UsageError("evaluate: spacing must be > 0");
  const auto pairs = pair_by_stem(opts.auto_dir, opts.manual_dir);
  if (pairs.empty()) throw UsageError("evaluate: no masks found");

  std::vector<FrameOutcome> outcomes(pairs.size());
  parallel_for(pairs.size(), opts.jobs, [&](std::size_t k) {
    FrameOutcome& o = outcomes[k];
    o.name = pairs[k].first.stem().string();
    try {
      const double spacing = opts.spacing_mm ? *opts.spacing_mm : read_spacing_sidecar(pairs[k].second);
      o.metrics = evaluate(read_mask(pairs[k].first), read_mask(pairs[k].second), spacing);
      o.ok = true;
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  });
  const MetricSummary s = summarize(outcomes);

  std::string csv = "frame";
  for (auto name : MetricsReport::kFieldNames) csv += "," + std::string(name);
  csv += "\n";
  auto row = [&](const std::string& label, const std::array<double, 10>& values) {
    csv += label;
    for (double v : values) csv += "," + number(v);
    csv += "\n";
  };
  for (const auto& o : outcomes) {
    if (o.ok) row(o.name, o.metrics.as_array());
  }
  if (s.count > 0) {
    row("mean", s.mean);
    row("std", s.stddev);
  }
  if (opts.out_csv.has_parent_path()) make_dirs(opts.out_csv.parent_path());
  write_file_atomic(opts.out_csv, csv);

  json summary = summary_json(s);
  json failures = json::array();
  for (const auto& o : outcomes) {
    if (!o.ok) {
      failures.push_back({{"name", o.name}, {"error", o.error}});
      log << "evaluate: " << o.name << ": " << o.error << "\n";
    }
  }
  summary["failed"] = failures;
  fs::path json_path = opts.out_csv;
  json_path.replace_extension(".json");
  write_file_atomic(json_path, dump(summary));
  log << "evaluate: " << s.count << " frames, DI " << mean_pm_std(s, "di") << ", JACC "
      << mean_pm_std(s, "jacc") << "\n";
  return s.failures ? kExitPartialFailure : kExitOk;
}

// --- phantom -----------------------------------------------------------------

PhantomOptions default_phantom_options() {
  PhantomOptions opts;
  opts.spec = default_suite_base(0.15);
  opts.jitter = default_suite_jitter();
  return opts;
}

void load_phantom_spec(const fs::path& path, PhantomOptions& opts) {
  json j = read_json_file(path);
  opts.spec = phantom_spec_from_json(j, PhantomSpec{});
  opts.jitter = j.contains("jitter") ? phantom_jitter_from_json(j.at("jitter")) : PhantomJitter{};
}

int cmd_phantom(const PhantomOptions& opts, std::ostream& log) {
  if (opts.n < 1) throw UsageError("phantom: n must be >= 1");
  if (opts.outdir.empty()) throw UsageError("phantom: no output directory given");
  std::vector<Phantom> suite;
  try {
    opts.spec.validate();
    suite = generate_suite(opts.n, opts.spec, opts.jitter);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("phantom: ") + e.what());
  }
  for (const char* sub : {"images", "masks", "specs"}) make_dirs(opts.outdir / sub);
  for (std::size_t k = 0; k < suite.size(); ++k) {
    const std::string name = frame_name(static_cast<int>(k));
    write_gray_pgm16(suite[k].image.raster(), opts.outdir / "images" / (name + ".pgm"));
    write_mask(suite[k].truth, opts.outdir / "masks" / (name + ".pgm"));
    write_file_atomic(opts.outdir / "specs" / (name + ".json"), dump(to_json(suite[k].spec)));
  }
  log << "phantom: wrote " << suite.size() << " frames to " << opts.outdir.string() << "\n";
  return kExitOk;
}

// --- bench -------------------------------------------------------------------

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& log) {
  opts.pipeline.validate();
  const fs::path images = opts.suite_dir / "images";
  const fs::path masks = opts.suite_dir / "masks";
  if (!fs::is_directory(images) || !fs::is_directory(masks)) {
    throw UsageError("bench: " + opts.suite_dir.string() + " must contain images/ and masks/");
  }
  const auto pairs = pair_by_stem(images, masks);
  if (pairs.empty()) throw UsageError("bench: empty suite");

  std::vector<LabeledFrame> frames;
  frames.reserve(pairs.size());
  for (const auto& [image, mask] : pairs) {
    frames.push_back({image.stem().string(), read_gray_image(image), read_mask(mask)});
  }
  const double spacing = opts.spacing_mm ? *opts.spacing_mm : frames.front().image.spacing_mm();

  std::map<std::string, MetricSummary> results;
  json report = json::object();
  std::size_t failures = 0;
  for (Clusterer method : {Clusterer::Ncm, Clusterer::Fcm}) {
    PipelineConfig cfg = opts.pipeline;
    cfg.clusterer = method;
    const auto outcomes = run_suite(frames, cfg, spacing, opts.jobs);
    for (const auto& o : outcomes) {
      if (!o.ok) log << "bench: " << to_string(method) << " " << o.name << ": " << o.error << "\n";
    }
    MetricSummary s = summarize(outcomes);
    failures += s.failures;
    json entry = summary_json(s);
    entry["mean_wall_ms"] = s.mean_wall_ms;
    report[to_string(method)] = entry;
    results[to_string(method)] = s;
  }

  const MetricSummary& ncm = results["ncm"];
  const MetricSummary& fcm = results["fcm"];
  const bool ncm_wins = ncm.count > 0 && fcm.count > 0 && ncm.mean_of("di") > fcm.mean_of("di");

  out << "method  frames  failures  " << std::left;
  for (const char* f : {"jacc", "di", "pad", "ad_area", "ad_curve_px", "hd_px"}) out << std::setw(18) << f;
  out << "wall_ms\n";
  for (const auto& [name, s] : {std::pair{"ncm", ncm}, std::pair{"fcm", fcm}}) {
    out << std::setw(8) << name << std::setw(8) << s.count << std::setw(10) << s.failures;
    for (const char* f : {"jacc", "di", "pad", "ad_area", "ad_curve_px", "hd_px"}) {
      out << std::setw(18) << mean_pm_std(s, f);
    }
    out << std::fixed << std::setprecision(1) << s.mean_wall_ms << "\n";
  }
  out << "ncm mean DI > fcm mean DI: " << (ncm_wins ? "yes" : "no") << "\n";

  report["frames"] = frames.size();
  report["ncm_di_greater"] = ncm_wins;
  if (opts.out_json) {
    if (opts.out_json->has_parent_path()) make_dirs(opts.out_json->parent_path());
    write_file_atomic(*opts.out_json, dump(report));
  }
  return failures ? kExitPartialFailure : kExitOk;
}

}  // namespace ncmseg
