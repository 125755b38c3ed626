#pragma once

#include "ncmseg/image.hpp"

namespace ncmseg {

/// Neutrosophic representation of a frame: truth, indeterminacy and
/// falsity maps, all in [0, 1] and sharing the source dimensions.
struct NsImage {
  RealRaster t_map;
  RealRaster i_map;
  RealRaster f_map;
  int window_w = 5;
};

inline constexpr int kDefaultNsWindow = 5;

/// Windowed mean over w x w with replicate-clamped borders.
RealRaster local_mean(const GrayImage& img, int w);

/// T = normalized local mean, I = normalized |g - local mean|, F = 1 - T.
///
/// Normalization uses the global min/max of each quantity. A flat local
/// mean gives T = F = 0.5 everywhere; a flat deviation map gives I = 0.
NsImage ns_transform(const GrayImage& img, int w = kDefaultNsWindow);

}  // namespace ncmseg
