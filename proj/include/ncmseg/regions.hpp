#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ncmseg/image.hpp"

namespace ncmseg {

enum class Connectivity { Four = 4, Eight = 8 };

struct ComponentLabels {
  Raster<std::int32_t> labels;  // 0 = background, 1..count
  std::vector<std::size_t> sizes;  // sizes[k] is the size of label k + 1
};

ComponentLabels label_components(const BinaryMask& mask, Connectivity conn);

/// Largest 8-connected component; the first one in raster order wins ties.
/// An empty mask stays empty.
BinaryMask largest_component(const BinaryMask& mask);

/// Drops 8-connected components smaller than `min_pixels`.
BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_pixels);

/// Fills background regions that are not 4-connected to the frame border.
BinaryMask fill_holes(const BinaryMask& mask);

/// Moore-neighbour trace of the outer boundary of the 8-connected component
/// holding the topmost-leftmost foreground pixel. Points are pixel centers,
/// visited clockwise (y grows downward) from that pixel. Empty mask gives an
/// empty contour.
Contour trace_boundary(const BinaryMask& mask);

/// One traced boundary per 8-connected component, in raster order of their
/// first pixel.
std::vector<Contour> trace_all_boundaries(const BinaryMask& mask);

/// Inverse of trace_boundary on hole-free components: the contour pixels plus
/// everything they enclose (the part of the frame a 4-connected flood from
/// outside cannot reach).
BinaryMask rasterize_contour(const Contour& contour, int width, int height);

/// Foreground pixels 8-adjacent to any pixel of `region`, restricted to
/// `candidates`.
BinaryMask adjacent_pixels(const BinaryMask& region, const BinaryMask& candidates);

}  // namespace ncmseg
