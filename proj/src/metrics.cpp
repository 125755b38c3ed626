#include "ncmseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ncmseg/regions.hpp"

namespace ncmseg {

OverlapCounts count_overlap(const BinaryMask& automatic, const BinaryMask& manual) {
  if (!automatic.same_shape(manual)) throw std::invalid_argument("mask dimensions differ");
  OverlapCounts counts;
  auto a = automatic.values();
  auto b = manual.values();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] != 0;
    const bool in_b = b[i] != 0;
    counts.auto_area += in_a;
    counts.manual_area += in_b;
    counts.intersection += in_a && in_b;
  }
  return counts;
}

namespace {

OverlapCounts nonempty_overlap(const BinaryMask& automatic, const BinaryMask& manual) {
  OverlapCounts counts = count_overlap(automatic, manual);
  if (counts.auto_area == 0 && counts.manual_area == 0) {
    throw std::invalid_argument("overlap undefined: both masks are empty");
  }
  return counts;
}

double jaccard_of(const OverlapCounts& c) {
  return static_cast<double>(c.intersection) /
         static_cast<double>(c.auto_area + c.manual_area - c.intersection);
}

// Nearest-neighbour queries against a point set sorted by x. The search
// widens outward from the query's x until dx^2 exceeds the best squared
// distance, so the minimum matches an exhaustive scan exactly.
class PointIndex {
 public:
  explicit PointIndex(const Contour& contour) : pts_(contour.points) {
    std::sort(pts_.begin(), pts_.end(),
              [](const Point2d& a, const Point2d& b) { return a.x < b.x; });
  }

  double nearest_squared(const Point2d& q) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), q.x,
                               [](const Point2d& p, double x) { return p.x < x; });
    double best = std::numeric_limits<double>::infinity();
    for (auto r = it; r != pts_.end(); ++r) {
      const double dx = r->x - q.x;
      if (dx * dx > best) break;
      best = std::min(best, dx * dx + (r->y - q.y) * (r->y - q.y));
    }
    for (auto l = it; l != pts_.begin();) {
      --l;
      const double dx = l->x - q.x;
      if (dx * dx > best) break;
      best = std::min(best, dx * dx + (l->y - q.y) * (l->y - q.y));
    }
    return best;
  }

 private:
  std::vector<Point2d> pts_;
};

// Nearest-point distance from each point of `from` to the set `to`, in the
// order of `from`.
std::vector<double> nearest_distances(const Contour& from, const Contour& to) {
  PointIndex index(to);
  std::vector<double> out;
  out.reserve(from.size());
  for (const auto& p : from.points) out.push_back(std::sqrt(index.nearest_squared(p)));
  return out;
}

void require_points(const Contour& a, const Contour& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("distance undefined for an empty contour");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Contour merged_boundary(const BinaryMask& mask) {
  Contour all;
  for (auto& c : trace_all_boundaries(mask)) {
    all.points.insert(all.points.end(), c.points.begin(), c.points.end());
  }
  return all;
}

}  // namespace

double jaccard(const BinaryMask& automatic, const BinaryMask& manual) {
  return jaccard_of(nonempty_overlap(automatic, manual));
}

double dice(const BinaryMask& automatic, const BinaryMask& manual) {
  OverlapCounts c = nonempty_overlap(automatic, manual);
  return 2.0 * static_cast<double>(c.intersection) /
         static_cast<double>(c.auto_area + c.manual_area);
}

double pad(const BinaryMask& automatic, const BinaryMask& manual) {
  OverlapCounts c = count_overlap(automatic, manual);
  if (c.manual_area == 0) throw std::invalid_argument("PAD undefined: manual mask is empty");
  const double diff = std::abs(static_cast<double>(c.auto_area) - static_cast<double>(c.manual_area));
  return diff / static_cast<double>(c.manual_area);
}

double ad_area(const BinaryMask& automatic, const BinaryMask& manual) {
  return 1.0 - jaccard(automatic, manual);
}

double ad_curve(const Contour& automatic, const Contour& manual, double spacing_mm) {
  require_points(automatic, manual);
  const double forward = mean_of(nearest_distances(automatic, manual));
  const double backward = mean_of(nearest_distances(manual, automatic));
  return 0.5 * (forward + backward) * spacing_mm;
}

double hausdorff(const Contour& automatic, const Contour& manual, double spacing_mm) {
  require_points(automatic, manual);
  auto forward = nearest_distances(automatic, manual);
  auto backward = nearest_distances(manual, automatic);
  const double h = std::max(*std::max_element(forward.begin(), forward.end()),
                            *std::max_element(backward.begin(), backward.end()));
  return h * spacing_mm;
}

double hd_pairwise(const Contour& automatic, const Contour& manual, double spacing_mm) {
  require_points(automatic, manual);
  double best = 0.0;
  for (const auto& a : automatic.points) {
    for (const auto& b : manual.points) {
      best = std::max(best, (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    }
  }
  return std::sqrt(best) * spacing_mm;
}

MetricsReport evaluate(const BinaryMask& automatic, const BinaryMask& manual, double spacing_mm) {
  if (!(spacing_mm > 0.0)) throw std::invalid_argument("spacing_mm must be > 0");
  OverlapCounts counts = nonempty_overlap(automatic, manual);
  MetricsReport r;
  r.jacc = jaccard_of(counts);
  r.di = 2.0 * static_cast<double>(counts.intersection) /
         static_cast<double>(counts.auto_area + counts.manual_area);
  r.pad = pad(automatic, manual);
  r.ad_area = 1.0 - r.jacc;

  Contour a = merged_boundary(automatic);
  Contour b = merged_boundary(manual);
  r.ad_curve_px = ad_curve(a, b);
  r.hd_px = hausdorff(a, b);
  r.hd_pairwise_px = hd_pairwise(a, b);
  r.ad_curve_mm = r.ad_curve_px * spacing_mm;
  r.hd_mm = r.hd_px * spacing_mm;
  r.hd_pairwise_mm = r.hd_pairwise_px * spacing_mm;
  return r;
}

}  // namespace ncmseg
