#include "ncmseg/ns_transform.hpp"

#include <algorithm>
#include <cmath>

namespace ncmseg {

RealRaster local_mean(const GrayImage& img, int w) { return box_mean(img.raster(), w); }

namespace {

// Maps values onto [0, 1] by global range; a flat input maps to `flat`.
RealRaster normalize_by_range(const RealRaster& src, double flat) {
  auto [lo, hi] = std::minmax_element(src.values().begin(), src.values().end());
  const double min = *lo;
  const double range = *hi - *lo;
  RealRaster out(src.width(), src.height(), flat);
  if (range > 0.0) {
    auto in = src.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < in.size(); ++i) {
      dst[i] = std::clamp((in[i] - min) / range, 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace

NsImage ns_transform(const GrayImage& img, int w) {
  RealRaster mean = local_mean(img, w);

  RealRaster deviation(img.width(), img.height());
  auto g = img.values();
  auto gm = mean.values();
  auto dev = deviation.values();
  for (std::size_t i = 0; i < g.size(); ++i) dev[i] = std::abs(g[i] - gm[i]);

  NsImage ns;
  ns.window_w = w;
  ns.t_map = normalize_by_range(mean, 0.5);
  ns.i_map = normalize_by_range(deviation, 0.0);
  ns.f_map = RealRaster(img.width(), img.height());
  auto t = ns.t_map.values();
  auto f = ns.f_map.values();
  for (std::size_t i = 0; i < t.size(); ++i) f[i] = 1.0 - t[i];
  return ns;
}

}  // namespace ncmseg
