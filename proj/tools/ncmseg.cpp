// ncmseg command-line tool: segment, evaluate, phantom, bench.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "ncmseg/commands.hpp"

using namespace ncmseg;

namespace {

// Clustering and pipeline settings that may be overridden on the command
// line. Only options actually given replace the config-file values.
struct PipelineFlags {
  int c = 0;
  double m = 0, w1 = 0, w2 = 0, w3 = 0, delta_reg = 0, epsilon = 0;
  int max_iter = 0;
  std::uint64_t seed = 0;
  int smooth_w = 0, preprocess_w = 0, catheter_radius_px = 0, min_region_px = 0, ns_window = 0, restarts = 0;
  std::string lumen_rule, features, clusterer, merge_ambiguity;
  std::map<std::string, CLI::Option*> given;

  void attach(CLI::App& app) {
    given["c"] = app.add_option("--c", c, "cluster count");
    given["m"] = app.add_option("--m", m, "fuzzifier (> 1)");
    given["w1"] = app.add_option("--w1", w1, "determinate weight");
    given["w2"] = app.add_option("--w2", w2, "ambiguity weight");
    given["w3"] = app.add_option("--w3", w3, "outlier weight");
    given["delta_reg"] = app.add_option("--delta-reg", delta_reg, "outlier regularizer");
    given["epsilon"] = app.add_option("--epsilon", epsilon, "convergence tolerance");
    given["max_iter"] = app.add_option("--max-iter", max_iter, "iteration cap");
    given["seed"] = app.add_option("--seed", seed, "initialization seed");
    given["smooth_w"] = app.add_option("--smooth-w", smooth_w, "label smoothing window (odd)");
    given["preprocess_w"] = app.add_option("--preprocess-w", preprocess_w, "pre-filter window (odd, 1 = off)");
    given["catheter_radius_px"] = app.add_option("--catheter-radius", catheter_radius_px, "central disk to mask");
    given["min_region_px"] = app.add_option("--min-region", min_region_px, "smallest kept component");
    given["ns_window"] = app.add_option("--ns-window", ns_window, "local-mean window of the NS transform");
    given["restarts"] = app.add_option("--restarts", restarts, "clustering fits from consecutive seeds");
    given["lumen_rule"] = app.add_option("--lumen-rule", lumen_rule, "darkest-cluster | center-adjacent");
    given["features"] = app.add_option("--features", features, "intensity | ns-t | ns-ti");
    given["clusterer"] = app.add_option("--clusterer", clusterer, "ncm | fcm");
    given["merge_ambiguity"] =
        app.add_option("--merge-ambiguity", merge_ambiguity, "true | false")->check(CLI::IsMember({"true", "false"}));
  }

  bool has(const std::string& key) const { return given.at(key)->count() > 0; }

  void apply(PipelineConfig& cfg) const {
    NcmParams& p = cfg.ncm;
    if (has("c")) p.c = c;
    if (has("m")) p.m = m;
    if (has("w1")) p.w1 = w1;
    if (has("w2")) p.w2 = w2;
    if (has("w3")) p.w3 = w3;
    if (has("delta_reg")) p.delta_reg = delta_reg;
    if (has("epsilon")) p.epsilon = epsilon;
    if (has("max_iter")) p.max_iter = max_iter;
    if (has("seed")) p.seed = seed;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    p = p.normalized();
    if (has("smooth_w")) cfg.smooth_w = smooth_w;
    if (has("preprocess_w")) cfg.preprocess_w = preprocess_w;
    if (has("catheter_radius_px")) cfg.catheter_radius_px = catheter_radius_px;
    if (has("min_region_px")) cfg.min_region_px = min_region_px;
    if (has("ns_window")) cfg.ns_window = ns_window;
    if (has("restarts")) cfg.restarts = restarts;
    if (has("merge_ambiguity")) cfg.merge_ambiguity = merge_ambiguity == "true";
    try {
      if (has("lumen_rule")) cfg.lumen_rule = parse_lumen_rule(lumen_rule);
      if (has("features")) cfg.features = parse_feature_source(features);
      if (has("clusterer")) cfg.clusterer = parse_clusterer(clusterer);
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
};

RunConfig base_config(const std::string& config_path) {
  if (config_path.empty()) {
    RunConfig cfg;
    cfg.pipeline.ncm = cfg.pipeline.ncm.normalized();
    return cfg;
  }
  return load_run_config(config_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neutrosophic c-means lumen segmentation toolkit"};
  app.require_subcommand(1);

  // segment
  auto* seg = app.add_subcommand("segment", "segment one image or a directory of images");
  std::string seg_input, seg_out, seg_config;
  int seg_jobs = 0;
  double seg_spacing = 0;
  bool seg_timings = false, seg_dump_ns = false;
  PipelineFlags seg_flags;
  seg->add_option("input", seg_input, "image file or directory (.pgm/.png)");
  seg->add_option("--config", seg_config, "JSON run configuration")->check(CLI::ExistingFile);
  seg->add_option("--out", seg_out, "output directory");
  auto* seg_jobs_opt = seg->add_option("--jobs", seg_jobs, "concurrent frames")->check(CLI::PositiveNumber);
  auto* seg_spacing_opt = seg->add_option("--spacing-mm", seg_spacing, "pixel spacing override")
                              ->check(CLI::PositiveNumber);
  seg->add_flag("--timings", seg_timings, "record per-stage timings in the manifest");
  seg->add_flag("--dump-ns", seg_dump_ns, "write the T, I, F maps under ns/");
  seg_flags.attach(*seg);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score automatic masks against manual masks");
  std::string ev_auto, ev_manual, ev_out, ev_config;
  int ev_jobs = 0;
  double ev_spacing = 0;
  ev->add_option("auto_dir", ev_auto, "directory of automatic masks")->required();
  ev->add_option("manual_dir", ev_manual, "directory of manual masks")->required();
  ev->add_option("--out", ev_out, "metrics CSV path (a .json summary is written beside it)")->required();
  ev->add_option("--config", ev_config, "JSON run configuration (spacing_mm, jobs)")->check(CLI::ExistingFile);
  auto* ev_jobs_opt = ev->add_option("--jobs", ev_jobs, "concurrent frames")->check(CLI::PositiveNumber);
  auto* ev_spacing_opt =
      ev->add_option("--spacing-mm", ev_spacing, "pixel spacing override")->check(CLI::PositiveNumber);

  // phantom
  auto* ph = app.add_subcommand("phantom", "generate a synthetic suite with ground truth");
  std::string ph_spec, ph_out;
  int ph_n = kDefaultSuiteSize;
  std::uint64_t ph_seed = 0;
  double ph_sigma = 0;
  ph->add_option("spec", ph_spec, "phantom spec JSON (defaults to the standard suite)")->check(CLI::ExistingFile);
  ph->add_option("-n,--n", ph_n, "number of frames")->capture_default_str();
  ph->add_option("--out", ph_out, "output directory")->required();
  auto* ph_seed_opt = ph->add_option("--seed", ph_seed, "base seed");
  auto* ph_sigma_opt = ph->add_option("--speckle-sigma", ph_sigma, "speckle level")->check(CLI::NonNegativeNumber);

  // bench
  auto* bn = app.add_subcommand("bench", "compare NCM and FCM segmentation on a phantom suite");
  std::string bn_suite, bn_out, bn_config;
  int bn_jobs = 0;
  double bn_spacing = 0;
  PipelineFlags bn_flags;
  bn->add_option("suite_dir", bn_suite, "directory with images/ and masks/")->required();
  bn->add_option("--config", bn_config, "JSON run configuration")->check(CLI::ExistingFile);
  bn->add_option("--out", bn_out, "write the comparison as JSON");
  auto* bn_jobs_opt = bn->add_option("--jobs", bn_jobs, "concurrent frames")->check(CLI::PositiveNumber);
  auto* bn_spacing_opt =
      bn->add_option("--spacing-mm", bn_spacing, "pixel spacing override")->check(CLI::PositiveNumber);
  bn_flags.attach(*bn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*seg) {
      SegmentOptions opts;
      opts.config = base_config(seg_config);
      seg_flags.apply(opts.config.pipeline);
      if (!seg_input.empty()) opts.config.input = seg_input;
      if (!seg_out.empty()) opts.config.output = seg_out;
      if (seg_jobs_opt->count()) opts.config.jobs = seg_jobs;
      if (seg_spacing_opt->count()) opts.config.spacing_mm = seg_spacing;
      opts.timings = seg_timings;
      opts.dump_ns = seg_dump_ns;
      return cmd_segment(opts, std::cerr);
    }
    if (*ev) {
      RunConfig cfg = base_config(ev_config);
      EvaluateOptions opts;
      opts.auto_dir = ev_auto;
      opts.manual_dir = ev_manual;
      opts.out_csv = ev_out;
      opts.spacing_mm = cfg.spacing_mm;
      opts.jobs = cfg.jobs;
      if (ev_spacing_opt->count()) opts.spacing_mm = ev_spacing;
      if (ev_jobs_opt->count()) opts.jobs = ev_jobs;
      return cmd_evaluate(opts, std::cerr);
    }
    if (*ph) {
      PhantomOptions opts = default_phantom_options();
      if (!ph_spec.empty()) load_phantom_spec(ph_spec, opts);
      if (ph_seed_opt->count()) opts.spec.seed = ph_seed;
      if (ph_sigma_opt->count()) opts.spec.speckle_sigma = ph_sigma;
      opts.n = ph_n;
      opts.outdir = ph_out;
      return cmd_phantom(opts, std::cerr);
    }
    if (*bn) {
      RunConfig cfg = base_config(bn_config);
      bn_flags.apply(cfg.pipeline);
      BenchOptions opts;
      opts.pipeline = cfg.pipeline;
      opts.suite_dir = bn_suite;
      opts.spacing_mm = cfg.spacing_mm;
      opts.jobs = cfg.jobs;
      if (!bn_out.empty()) opts.out_json = bn_out;
      if (bn_jobs_opt->count()) opts.jobs = bn_jobs;
      if (bn_spacing_opt->count()) opts.spacing_mm = bn_spacing;
      return cmd_bench(opts, std::cout, std::cerr);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartialFailure;
  }
  return kExitUsage;
}
