#include "ncmseg/image.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ncmseg {

namespace fs = std::filesystem;

GrayImage::GrayImage(RealRaster pixels, double spacing_mm)
    : pixels_(std::move(pixels)), spacing_mm_(spacing_mm) {
  if (pixels_.empty()) {
    throw std::invalid_argument("image has zero dimensions");
  }
  if (!(spacing_mm_ > 0.0) || !std::isfinite(spacing_mm_)) {
    throw std::invalid_argument("spacing_mm must be > 0");
  }
  for (double v : pixels_.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("intensity outside [0, 1]");
    }
  }
}

bool Contour::is_valid() const noexcept {
  if (!closed) return true;
  if (points.size() < 3) return false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == points[(i + 1) % points.size()]) return false;
  }
  return true;
}

std::size_t count_foreground(const BinaryMask& mask) noexcept {
  return static_cast<std::size_t>(std::count_if(
      mask.values().begin(), mask.values().end(),
      [](std::uint8_t b) { return b != 0; }));
}

// ---------------------------------------------------------------------------

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return ss.str();
}

// Netpbm header tokens are separated by whitespace; '#' starts a comment
// running to end of line.
class PnmHeader {
 public:
  explicit PnmHeader(const std::string& bytes) : bytes_(bytes) {}

  std::string magic() {
    if (bytes_.size() < 2) throw IoError("truncated PNM header");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  long next_int() {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) throw IoError("malformed PNM header");
    long value = 0;
    auto [ptr, ec] = std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    if (ec != std::errc{}) throw IoError("malformed PNM header value");
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw IoError("malformed PNM header terminator");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

RealRaster decode_pgm(const std::string& bytes, const fs::path& path) {
  PnmHeader header(bytes);
  std::string magic = header.magic();
  if (magic == "P6" || magic == "P3" || magic == "P7") {
    throw IoError("multi-channel input not supported: " + path.string());
  }
  if (magic != "P5") throw IoError("not a binary graymap (P5): " + path.string());
  long width = header.next_int();
  long height = header.next_int();
  long maxval = header.next_int();
  if (width < 1 || height < 1) throw IoError("zero image dimensions: " + path.string());
  if (maxval < 1 || maxval > 65535) throw IoError("invalid maxval: " + path.string());
  std::size_t offset = header.raster_offset();
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t bpp = maxval < 256 ? 1 : 2;
  if (bytes.size() < offset + n * bpp) throw IoError("truncated raster: " + path.string());

  std::vector<double> px(n);
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned v = bpp == 1 ? raw[i] : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    px[i] = std::min(1.0, static_cast<double>(v) / static_cast<double>(maxval));
  }
  return RealRaster(static_cast<int>(width), static_cast<int>(height), std::move(px));
}

RealRaster decode_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + image.message);
  }
  if (image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA)) {
    png_image_free(&image);
    throw IoError("multi-channel input not supported: " + path.string());
  }
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw IoError("zero image dimensions: " + path.string());
  }
  const bool sixteen = (image.format & PNG_FORMAT_FLAG_LINEAR) != 0;
  image.format = sixteen ? PNG_FORMAT_LINEAR_Y : PNG_FORMAT_GRAY;
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  std::vector<double> px(n);
  bool ok = false;
  if (sixteen) {
    std::vector<png_uint_16> buf(n);
    ok = png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr) != 0;
    for (std::size_t i = 0; i < n; ++i) px[i] = buf[i] / 65535.0;
  } else {
    std::vector<png_byte> buf(n);
    ok = png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr) != 0;
    for (std::size_t i = 0; i < n; ++i) px[i] = buf[i] / 255.0;
  }
  if (!ok) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed for " + path.string() + ": " + msg);
  }
  return RealRaster(static_cast<int>(image.width), static_cast<int>(image.height), std::move(px));
}

double sidecar_spacing(const fs::path& path) {
  fs::path sidecar = path;
  sidecar += ".json";
  if (!fs::exists(sidecar)) return 1.0;
  auto doc = nlohmann::json::parse(slurp(sidecar), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw IoError("malformed sidecar " + sidecar.string());
  }
  if (!doc.contains("spacing_mm")) return 1.0;
  if (!doc["spacing_mm"].is_number()) {
    throw IoError("spacing_mm must be a number in " + sidecar.string());
  }
  return doc["spacing_mm"].get<double>();
}

Raster<std::uint8_t> quantize(const RealRaster& img) {
  Raster<std::uint8_t> out(img.width(), img.height());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    double v = std::clamp(src[i], 0.0, 1.0);
    dst[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace

GrayImage read_gray_image(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  std::string bytes = slurp(path);
  RealRaster raster;
  static constexpr unsigned char kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8,
                                      reinterpret_cast<const unsigned char*>(bytes.data()))) {
    raster = decode_png(path);
  } else {
    raster = decode_pgm(bytes, path);
  }
  return GrayImage(std::move(raster), sidecar_spacing(path));
}

double read_spacing_sidecar(const fs::path& path) { return sidecar_spacing(path); }

std::string encode_pgm(const Raster<std::uint8_t>& bytes) {
  std::string out = "P5\n" + std::to_string(bytes.width()) + " " +
                    std::to_string(bytes.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(bytes.values().data()), bytes.size());
  return out;
}

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(rng() & 0xffffffu);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

void write_mask(const BinaryMask& mask, const fs::path& path) {
  Raster<std::uint8_t> bytes(mask.width(), mask.height());
  auto src = mask.values();
  auto dst = bytes.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 255 : 0;
  write_file_atomic(path, encode_pgm(bytes));
}

BinaryMask read_mask(const fs::path& path) {
  GrayImage img = read_gray_image(path);
  BinaryMask mask(img.width(), img.height());
  auto src = img.values();
  auto dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= 0.5 ? 1 : 0;
  return mask;
}

void write_gray_pgm(const RealRaster& img, const fs::path& path) {
  write_file_atomic(path, encode_pgm(quantize(img)));
}

void write_gray_pgm16(const RealRaster& img, const fs::path& path) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n65535\n";
  out.reserve(out.size() + 2 * img.size());
  for (double v : img.values()) {
    auto q = static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xff));
  }
  write_file_atomic(path, out);
}

void write_gray_png(const RealRaster& img, const fs::path& path) {
  Raster<std::uint8_t> bytes = quantize(img);
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, bytes.values().data(), 0, nullptr)) {
    throw IoError("PNG encode failed: " + std::string(image.message));
  }
  std::string buf(size, '\0');
  if (!png_image_write_to_memory(&image, buf.data(), &size, 0, bytes.values().data(), 0,
                                 nullptr)) {
    throw IoError("PNG encode failed: " + std::string(image.message));
  }
  buf.resize(size);
  write_file_atomic(path, buf);
}

std::string encode_contour_csv(const Contour& contour) {
  std::string out = "x,y\n";
  for (const auto& p : contour.points) {
    append_number(out, p.x);
    out.push_back(',');
    append_number(out, p.y);
    out.push_back('\n');
  }
  return out;
}

void write_contour_csv(const Contour& contour, const fs::path& path) {
  write_file_atomic(path, encode_contour_csv(contour));
}

Contour read_contour_csv(const fs::path& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != "x,y") {
    throw IoError("missing x,y header in " + path.string());
  }
  Contour contour;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed contour row in " + path.string());
    Point2d p;
    auto r1 = std::from_chars(line.data(), line.data() + comma, p.x);
    auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), p.y);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) {
      throw IoError("malformed contour row in " + path.string());
    }
    contour.points.push_back(p);
  }
  return contour;
}

// ---------------------------------------------------------------------------

RealRaster box_mean(const RealRaster& src, int w) {
  if (w < 1 || w % 2 == 0) throw std::invalid_argument("window must be odd and >= 1");
  if (w == 1) return src;
  const int r = w / 2;
  const int W = src.width();
  const int H = src.height();
  // Separable pass of window means, each accumulated as deviations from the
  // center value so a flat window reproduces its value exactly.
  RealRaster rows(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double ref = src(x, y);
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += src(std::clamp(x + k, 0, W - 1), y) - ref;
      rows(x, y) = ref + s / w;
    }
  }
  RealRaster out(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double ref = rows(x, y);
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += rows(x, std::clamp(y + k, 0, H - 1)) - ref;
      out(x, y) = ref + s / w;
    }
  }
  return out;
}

GrayImage mean_filter(const GrayImage& img, int w) {
  RealRaster out = box_mean(img.raster(), w);
  // Rounding in the window sum can push a mean a hair outside [0, 1].
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return GrayImage(std::move(out), img.spacing_mm());
}

}  // namespace ncmseg
