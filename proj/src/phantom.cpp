#include "ncmseg/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ncmseg {

namespace {

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Normalized elliptical radius of (x, y) for semi-axes (rx + grow, ry + grow).
double elliptic_radius(const PhantomSpec& s, int x, int y, double grow) {
  const double dx = x - s.lumen_cx;
  const double dy = y - s.lumen_cy;
  const double c = std::cos(deg2rad(s.lumen_angle_deg));
  const double sn = std::sin(deg2rad(s.lumen_angle_deg));
  const double u = (dx * c + dy * sn) / (s.lumen_rx + grow);
  const double v = (-dx * sn + dy * c) / (s.lumen_ry + grow);
  return u * u + v * v;
}

bool in_wall_or_lumen(const PhantomSpec& s, int x, int y) {
  const double t = s.wall_thickness_px;
  if (s.is_circle()) {
    const double dx = x - s.lumen_cx;
    const double dy = y - s.lumen_cy;
    return dx * dx + dy * dy <= (s.lumen_rx + t) * (s.lumen_rx + t);
  }
  return elliptic_radius(s, x, y, t) <= 1.0;
}

// Angular distance in degrees, folded to [0, 180].
double angle_gap(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

}  // namespace

void PhantomSpec::validate() const {
  if (size < 8) throw std::invalid_argument("phantom: size must be >= 8");
  if (!(lumen_rx > 0.0 && lumen_ry > 0.0)) throw std::invalid_argument("phantom: lumen radius must be > 0");
  if (wall_thickness_px < 0) throw std::invalid_argument("phantom: wall thickness must be >= 0");
  if (!unit_interval(lumen_intensity) || !unit_interval(wall_intensity) ||
      !unit_interval(background_intensity)) {
    throw std::invalid_argument("phantom: intensities must lie in [0, 1]");
  }
  if (!(speckle_sigma >= 0.0)) throw std::invalid_argument("phantom: speckle_sigma must be >= 0");
  if (!(guidewire_width_deg > 0.0)) throw std::invalid_argument("phantom: guide-wire width must be > 0");
  if (catheter_r_px && !(*catheter_r_px > 0.0)) {
    throw std::invalid_argument("phantom: catheter radius must be > 0");
  }
  const double reach = std::max(lumen_rx, lumen_ry) + wall_thickness_px;
  if (lumen_cx - reach < 0.0 || lumen_cy - reach < 0.0 || lumen_cx + reach > size - 1 ||
      lumen_cy + reach > size - 1) {
    throw std::invalid_argument("phantom: lumen and wall do not fit inside the frame");
  }
}

bool in_lumen(const PhantomSpec& s, int x, int y) {
  if (s.is_circle()) {
    const double dx = x - s.lumen_cx;
    const double dy = y - s.lumen_cy;
    return dx * dx + dy * dy <= s.lumen_rx * s.lumen_rx;
  }
  return elliptic_radius(s, x, y, 0.0) <= 1.0;
}

Phantom generate(const PhantomSpec& spec) {
  spec.validate();
  const int n = spec.size;
  RealRaster px(n, n, spec.background_intensity);
  BinaryMask truth(n, n);
  const double center = static_cast<double>(n / 2);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const bool lumen = in_lumen(spec, x, y);
      truth(x, y) = lumen ? 1 : 0;
      if (lumen) {
        px(x, y) = spec.lumen_intensity;
      } else if (in_wall_or_lumen(spec, x, y)) {
        px(x, y) = spec.wall_intensity;
      }
      if (!lumen && spec.guidewire_angle_deg) {
        const double theta = std::atan2(y - spec.lumen_cy, x - spec.lumen_cx) * 180.0 / std::numbers::pi;
        if (angle_gap(theta, *spec.guidewire_angle_deg) <= 0.5 * spec.guidewire_width_deg) {
          px(x, y) = kGuidewireShadowIntensity;
        }
      }
      if (spec.catheter_r_px) {
        const double dx = x - center;
        const double dy = y - center;
        if (dx * dx + dy * dy <= *spec.catheter_r_px * *spec.catheter_r_px) px(x, y) = kCatheterIntensity;
      }
    }
  }
  if (spec.speckle_sigma > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.speckle_sigma);
    for (double& v : px.values()) v = std::clamp(v * (1.0 + noise(rng)), 0.0, 1.0);
  }
  return {GrayImage(std::move(px)), std::move(truth), spec};
}

std::vector<Phantom> generate_suite(int n, const PhantomSpec& base, const PhantomJitter& jitter) {
  if (n < 1) throw std::invalid_argument("phantom suite size must be >= 1");
  std::seed_seq seq{base.seed, std::uint64_t{0x9e3779b97f4a7c15ULL}};
  std::mt19937_64 rng(seq);
  auto draw = [&](double half_width) {
    if (half_width <= 0.0) return 0.0;
    return std::uniform_real_distribution<double>(-half_width, half_width)(rng);
  };

  std::vector<Phantom> suite;
  suite.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    PhantomSpec s = base;
    s.seed = base.seed + static_cast<std::uint64_t>(k);
    s.lumen_cx += draw(jitter.center_px);
    s.lumen_cy += draw(jitter.center_px);
    const double dr = draw(jitter.radius_px);
    s.lumen_rx += dr;
    s.lumen_ry += dr;
    if (jitter.aspect > 0.0) {
      s.lumen_ry = s.lumen_rx * (1.0 + draw(jitter.aspect));
      s.lumen_angle_deg = std::uniform_real_distribution<double>(0.0, 180.0)(rng);
    }
    s.speckle_sigma = std::max(0.0, s.speckle_sigma + draw(jitter.speckle_sigma));
    suite.push_back(generate(s));
  }
  return suite;
}

PhantomSpec default_suite_base(double speckle_sigma, std::uint64_t seed) {
  PhantomSpec s;
  s.speckle_sigma = speckle_sigma;
  s.seed = seed;
  return s;
}

PhantomJitter default_suite_jitter() {
  PhantomJitter j;
  j.center_px = 12.0;
  j.radius_px = 14.0;
  j.aspect = 0.15;
  return j;
}

}  // namespace ncmseg
