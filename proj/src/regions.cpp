#include "ncmseg/regions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace ncmseg {

namespace {

struct Offset {
  int dx;
  int dy;
};

constexpr std::array<Offset, 4> kFour{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
constexpr std::array<Offset, 8> kEight{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

// Clockwise on screen starting at west: W, NW, N, NE, E, SE, S, SW.
constexpr std::array<Offset, 8> kRing{
    {{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

int ring_index(int dx, int dy) {
  for (int k = 0; k < 8; ++k) {
    if (kRing[k].dx == dx && kRing[k].dy == dy) return k;
  }
  return -1;
}

template <typename Neighbours>
void flood(const BinaryMask& mask, Raster<std::int32_t>& labels, int sx, int sy,
           std::int32_t label, std::size_t& size, const Neighbours& nbrs) {
  std::deque<std::pair<int, int>> queue{{sx, sy}};
  labels(sx, sy) = label;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    ++size;
    for (const auto& o : nbrs) {
      const int nx = x + o.dx;
      const int ny = y + o.dy;
      if (mask.contains(nx, ny) && mask(nx, ny) && labels(nx, ny) == 0) {
        labels(nx, ny) = label;
        queue.emplace_back(nx, ny);
      }
    }
  }
}

// Background reachable from outside the frame through 4-connected steps,
// where `blocked` cells act as walls.
BinaryMask exterior_of(const BinaryMask& blocked) {
  const int W = blocked.width() + 2;
  const int H = blocked.height() + 2;
  BinaryMask padded(W, H);
  for (int y = 0; y < blocked.height(); ++y) {
    for (int x = 0; x < blocked.width(); ++x) padded(x + 1, y + 1) = blocked(x, y) ? 1 : 0;
  }
  BinaryMask reached(W, H);
  std::deque<std::pair<int, int>> queue{{0, 0}};
  reached(0, 0) = 1;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (const auto& o : kFour) {
      const int nx = x + o.dx;
      const int ny = y + o.dy;
      if (padded.contains(nx, ny) && !padded(nx, ny) && !reached(nx, ny)) {
        reached(nx, ny) = 1;
        queue.emplace_back(nx, ny);
      }
    }
  }
  BinaryMask out(blocked.width(), blocked.height());
  for (int y = 0; y < blocked.height(); ++y) {
    for (int x = 0; x < blocked.width(); ++x) out(x, y) = reached(x + 1, y + 1);
  }
  return out;
}

bool is_set(const BinaryMask& mask, int x, int y) { return mask.contains(x, y) && mask(x, y); }

template <typename Inside>
Contour trace_from(const Inside& inside, std::size_t pixel_count, int sx, int sy) {
  Contour contour;
  contour.closed = true;

  // Finds the next boundary pixel clockwise around (x, y), starting just after
  // the backtrack direction. Returns false for an isolated pixel.
  auto step = [&](int x, int y, int back, int& nx, int& ny, int& nback) {
    for (int k = 1; k <= 8; ++k) {
      const int idx = (back + k) % 8;
      const int cx = x + kRing[idx].dx;
      const int cy = y + kRing[idx].dy;
      if (inside(cx, cy)) {
        const int prev = (idx + 7) % 8;
        const int bx = x + kRing[prev].dx;
        const int by = y + kRing[prev].dy;
        nx = cx;
        ny = cy;
        nback = ring_index(bx - cx, by - cy);
        return true;
      }
    }
    return false;
  };

  contour.points.push_back({static_cast<double>(sx), static_cast<double>(sy)});
  int x1 = 0, y1 = 0, b1 = 0;
  // The start is the first foreground pixel in raster order, so its west
  // neighbour is background.
  if (!step(sx, sy, 0, x1, y1, b1)) return contour;

  int x = x1, y = y1, back = b1;
  // Jacob's criterion: stop on re-entering the start along the first move.
  const std::size_t guard = 4 * pixel_count + 8;
  for (std::size_t n = 0; n < guard; ++n) {
    int nx = 0, ny = 0, nback = 0;
    step(x, y, back, nx, ny, nback);
    if (x == sx && y == sy && nx == x1 && ny == y1) break;
    contour.points.push_back({static_cast<double>(x), static_cast<double>(y)});
    x = nx;
    y = ny;
    back = nback;
  }
  return contour;
}

}  // namespace

ComponentLabels label_components(const BinaryMask& mask, Connectivity conn) {
  ComponentLabels out{Raster<std::int32_t>(mask.width(), mask.height()), {}};
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y) != 0) continue;
      std::size_t size = 0;
      const auto label = static_cast<std::int32_t>(out.sizes.size() + 1);
      if (conn == Connectivity::Eight) {
        flood(mask, out.labels, x, y, label, size, kEight);
      } else {
        flood(mask, out.labels, x, y, label, size, kFour);
      }
      out.sizes.push_back(size);
    }
  }
  return out;
}

BinaryMask largest_component(const BinaryMask& mask) {
  ComponentLabels cc = label_components(mask, Connectivity::Eight);
  BinaryMask out(mask.width(), mask.height());
  if (cc.sizes.empty()) return out;
  const auto best = static_cast<std::int32_t>(
      std::max_element(cc.sizes.begin(), cc.sizes.end()) - cc.sizes.begin() + 1);
  auto src = cc.labels.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] == best ? 1 : 0;
  return out;
}

BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_pixels) {
  ComponentLabels cc = label_components(mask, Connectivity::Eight);
  BinaryMask out(mask.width(), mask.height());
  auto src = cc.labels.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = src[i] > 0 && cc.sizes[static_cast<std::size_t>(src[i] - 1)] >= min_pixels ? 1 : 0;
  }
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  BinaryMask exterior = exterior_of(mask);
  BinaryMask out(mask.width(), mask.height());
  auto ext = exterior.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < ext.size(); ++i) dst[i] = ext[i] ? 0 : 1;
  return out;
}

Contour trace_boundary(const BinaryMask& mask) {
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask(x, y)) {
        return trace_from([&](int px, int py) { return is_set(mask, px, py); }, mask.size(), x, y);
      }
    }
  }
  return {};
}

std::vector<Contour> trace_all_boundaries(const BinaryMask& mask) {
  ComponentLabels cc = label_components(mask, Connectivity::Eight);
  std::vector<Contour> out;
  std::vector<bool> seen(cc.sizes.size(), false);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      const std::int32_t label = cc.labels(x, y);
      if (label == 0 || seen[static_cast<std::size_t>(label - 1)]) continue;
      seen[static_cast<std::size_t>(label - 1)] = true;
      auto inside = [&](int px, int py) {
        return cc.labels.contains(px, py) && cc.labels(px, py) == label;
      };
      out.push_back(trace_from(inside, mask.size(), x, y));
    }
  }
  return out;
}

BinaryMask rasterize_contour(const Contour& contour, int width, int height) {
  BinaryMask walls(width, height);
  for (const auto& p : contour.points) {
    const int x = static_cast<int>(std::lround(p.x));
    const int y = static_cast<int>(std::lround(p.y));
    if (walls.contains(x, y)) walls(x, y) = 1;
  }
  return fill_holes(walls);
}

BinaryMask adjacent_pixels(const BinaryMask& region, const BinaryMask& candidates) {
  BinaryMask out(region.width(), region.height());
  for (int y = 0; y < region.height(); ++y) {
    for (int x = 0; x < region.width(); ++x) {
      if (!candidates(x, y) || region(x, y)) continue;
      for (const auto& o : kEight) {
        if (is_set(region, x + o.dx, y + o.dy)) {
          out(x, y) = 1;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace ncmseg
