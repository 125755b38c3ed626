#pragma once

#include <array>
#include <string_view>

#include "ncmseg/image.hpp"

namespace ncmseg {

/// Agreement between an automatic and a manual lumen segmentation.
struct MetricsReport {
  double jacc = 0.0;
  double di = 0.0;
  double pad = 0.0;
  double ad_area = 0.0;      // 1 - |A n B| / (|A| + |B| - |A n B|)
  double ad_curve_px = 0.0;  // symmetric mean nearest-point distance
  double ad_curve_mm = 0.0;
  double hd_px = 0.0;        // symmetric Hausdorff distance
  double hd_mm = 0.0;
  double hd_pairwise_px = 0.0;  // max over all boundary point pairs
  double hd_pairwise_mm = 0.0;

  static constexpr std::array<std::string_view, 10> kFieldNames{
      "jacc",  "di",    "pad",           "ad_area",       "ad_curve_px",
      "ad_curve_mm", "hd_px", "hd_mm", "hd_pairwise_px", "hd_pairwise_mm"};
  std::array<double, 10> as_array() const {
    return {jacc, di, pad, ad_area, ad_curve_px, ad_curve_mm, hd_px, hd_mm, hd_pairwise_px,
            hd_pairwise_mm};
  }
};

struct OverlapCounts {
  std::size_t auto_area = 0;
  std::size_t manual_area = 0;
  std::size_t intersection = 0;
};

/// Throws std::invalid_argument when the masks differ in size.
OverlapCounts count_overlap(const BinaryMask& automatic, const BinaryMask& manual);

// Region metrics. jaccard, dice and ad_area throw std::invalid_argument
// when both masks are empty; pad throws when the manual mask is empty.
double jaccard(const BinaryMask& automatic, const BinaryMask& manual);
double dice(const BinaryMask& automatic, const BinaryMask& manual);
double pad(const BinaryMask& automatic, const BinaryMask& manual);
double ad_area(const BinaryMask& automatic, const BinaryMask& manual);

// Curve metrics between sampled boundary points, scaled by spacing_mm.
// Empty contours throw std::invalid_argument.
double ad_curve(const Contour& automatic, const Contour& manual, double spacing_mm = 1.0);
double hausdorff(const Contour& automatic, const Contour& manual, double spacing_mm = 1.0);
double hd_pairwise(const Contour& automatic, const Contour& manual, double spacing_mm = 1.0);

/// All metrics for one frame. Boundaries are traced from each mask (every
/// 8-connected component contributes its outer boundary).
MetricsReport evaluate(const BinaryMask& automatic, const BinaryMask& manual,
                       double spacing_mm = 1.0);

}  // namespace ncmseg
