#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncmseg/image.hpp"

namespace ncmseg {

/// Geometry and appearance of a synthetic IVOCT-like frame: a dark lumen
/// (disk or rotated ellipse) inside a bright wall ring on a mid-gray
/// background, with multiplicative Gaussian speckle.
struct PhantomSpec {
  int size = 256;
  double lumen_cx = 128.0;
  double lumen_cy = 128.0;
  double lumen_rx = 48.0;
  double lumen_ry = 48.0;        // equal to rx for a disk
  double lumen_angle_deg = 0.0;  // ellipse rotation
  double lumen_intensity = 0.05;
  int wall_thickness_px = 20;
  double wall_intensity = 0.8;
  double background_intensity = 0.3;
  double speckle_sigma = 0.0;
  /// Dark radial shadow outside the lumen (guide wire).
  std::optional<double> guidewire_angle_deg;
  double guidewire_width_deg = 10.0;
  /// Bright disk at the frame center (imaging catheter).
  std::optional<double> catheter_r_px;
  std::uint64_t seed = 0;

  bool is_circle() const noexcept { return lumen_rx == lumen_ry; }
  /// Throws std::invalid_argument if the lumen plus wall leaves the frame,
  /// an intensity is outside [0, 1], or a size/radius is non-positive.
  void validate() const;

  friend bool operator==(const PhantomSpec&, const PhantomSpec&) = default;
};

inline constexpr double kGuidewireShadowIntensity = 0.1;
inline constexpr double kCatheterIntensity = 0.9;

struct Phantom {
  GrayImage image;
  BinaryMask truth;
  PhantomSpec spec;
};

/// Exact lumen predicate at pixel center (x, y).
bool in_lumen(const PhantomSpec& spec, int x, int y);

Phantom generate(const PhantomSpec& spec);

/// Uniform perturbation half-widths applied per suite member.
struct PhantomJitter {
  double center_px = 0.0;
  double radius_px = 0.0;
  double aspect = 0.0;         // ry = rx * (1 + U(-aspect, aspect))
  double speckle_sigma = 0.0;
};

/// n phantoms derived from `base`. Member k uses noise seed base.seed + k;
/// the jitter draws come from a generator seeded by base.seed.
std::vector<Phantom> generate_suite(int n, const PhantomSpec& base, const PhantomJitter& jitter);

/// The standard evaluation corpus size.
inline constexpr int kDefaultSuiteSize = 138;
PhantomSpec default_suite_base(double speckle_sigma, std::uint64_t seed = 2024);
PhantomJitter default_suite_jitter();

}  // namespace ncmseg
