#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncmseg/config.hpp"
#include "ncmseg/phantom.hpp"

namespace ncmseg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPartialFailure = 1;
inline constexpr int kExitUsage = 2;

/// Bad arguments or inputs that prevent a command from starting.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// .pgm/.png files of a directory sorted by name, or the single file given.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& input);

struct SegmentOptions {
  RunConfig config;  // input and output are taken from here
  bool timings = false;  // per-stage timings in the manifest (not reproducible)
  bool dump_ns = false;  // also write the T, I, F maps
};

/// Writes masks/<stem>.pgm, contours/<stem>.csv, overlays/<stem>.png and
/// manifest.json under config.output. Failed frames get no output files.
int cmd_segment(const SegmentOptions& opts, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path auto_dir;
  std::filesystem::path manual_dir;
  std::filesystem::path out_csv;  // summary JSON goes next to it
  std::optional<double> spacing_mm;
  int jobs = 1;
};

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& log);

struct PhantomOptions {
  PhantomSpec spec;
  PhantomJitter jitter;
  int n = kDefaultSuiteSize;
  std::filesystem::path outdir;
};

/// Defaults used when no spec file is given: the standard suite base and
/// jitter.
PhantomOptions default_phantom_options();
/// Reads a phantom spec JSON with an optional "jitter" object.
void load_phantom_spec(const std::filesystem::path& path, PhantomOptions& opts);

/// Writes images/frame_NNN.pgm (16-bit), masks/frame_NNN.pgm and
/// specs/frame_NNN.json.
int cmd_phantom(const PhantomOptions& opts, std::ostream& log);

struct BenchOptions {
  PipelineConfig pipeline;
  std::filesystem::path suite_dir;  // holds images/ and masks/
  std::optional<std::filesystem::path> out_json;
  std::optional<double> spacing_mm;
  int jobs = 1;
};

/// Segments the suite with NCM and with FCM and prints the comparison.
int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& log);

}  // namespace ncmseg
