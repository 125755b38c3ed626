#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncmseg {

/// Raised for unreadable, malformed or unwritable image/contour files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major 2-D grid. Coordinates are (x = column, y = row).
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw std::invalid_argument("raster dimensions must be >= 1");
    }
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
      throw std::invalid_argument("raster dimensions must be >= 1");
    }
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw std::invalid_argument("raster data length != width * height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  const std::vector<T>& vec() const noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using RealRaster = Raster<double>;

/// Grayscale frame with intensities normalized to [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(RealRaster pixels, double spacing_mm = 1.0);
  GrayImage(int width, int height, std::vector<double> pixels,
            double spacing_mm = 1.0)
      : GrayImage(RealRaster(width, height, std::move(pixels)), spacing_mm) {}

  int width() const noexcept { return pixels_.width(); }
  int height() const noexcept { return pixels_.height(); }
  double spacing_mm() const noexcept { return spacing_mm_; }
  double operator()(int x, int y) const { return pixels_(x, y); }
  const RealRaster& raster() const noexcept { return pixels_; }
  std::span<const double> values() const noexcept { return pixels_.values(); }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  RealRaster pixels_;
  double spacing_mm_ = 1.0;
};

/// Foreground/background mask; nonzero byte = foreground (lumen).
using BinaryMask = Raster<std::uint8_t>;

/// Per-pixel cluster labels: 0..C-1 determinate, C ambiguity, C+1 outlier.
struct LabelMap {
  Raster<std::int32_t> labels;
  int cluster_count = 0;

  int ambiguity_label() const noexcept { return cluster_count; }
  int outlier_label() const noexcept { return cluster_count + 1; }
};

struct Point2d {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2d&, const Point2d&) = default;
};

/// Ordered boundary polygon in pixel coordinates.
struct Contour {
  std::vector<Point2d> points;
  bool closed = true;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }
  /// Closed contours need >= 3 points and no repeated consecutive point.
  bool is_valid() const noexcept;
};

std::size_t count_foreground(const BinaryMask& mask) noexcept;

// --- file I/O ---------------------------------------------------------------

/// Reads a P5 graymap (8- or 16-bit) or a grayscale PNG. Intensities are
/// divided by the format maximum. Pixel spacing comes from an optional
/// sidecar "<path>.json" holding {"spacing_mm": x}; otherwise 1.0.
GrayImage read_gray_image(const std::filesystem::path& path);

/// Spacing from "<path>.json" if present, else 1.0.
double read_spacing_sidecar(const std::filesystem::path& path);

/// P5 with 0 for background and 255 for foreground.
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);
BinaryMask read_mask(const std::filesystem::path& path);

/// 8-bit P5 with intensities scaled by 255 and rounded.
void write_gray_pgm(const RealRaster& img, const std::filesystem::path& path);
/// 16-bit big-endian P5 (maxval 65535).
void write_gray_pgm16(const RealRaster& img, const std::filesystem::path& path);
/// 8-bit grayscale PNG with intensities scaled by 255 and rounded.
void write_gray_png(const RealRaster& img, const std::filesystem::path& path);

/// "x,y" header then one line per point, shortest round-trip decimals.
void write_contour_csv(const Contour& contour,
                       const std::filesystem::path& path);
Contour read_contour_csv(const std::filesystem::path& path);

/// Encoders used by the writers above, exposed for in-memory checks.
std::string encode_pgm(const Raster<std::uint8_t>& bytes);
std::string encode_contour_csv(const Contour& contour);

/// Writes via a temporary sibling and rename, so readers never observe a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view bytes);

// --- filtering --------------------------------------------------------------

/// w x w box mean with replicate-clamped borders. Every output pixel sums
/// its window in the same order, so constant inputs stay bit-identical.
RealRaster box_mean(const RealRaster& src, int w);

GrayImage mean_filter(const GrayImage& img, int w);

}  // namespace ncmseg
