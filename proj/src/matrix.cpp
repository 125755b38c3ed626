#include "ncmseg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ncmseg {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  Matrix out(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw std::invalid_argument("ragged feature rows");
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

void require_finite_data(const Matrix& data) {
  if (data.rows() == 0 || data.cols() == 0) throw std::invalid_argument("empty data");
  for (double v : data.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite input value");
  }
}

Matrix pick_initial_centers(const Matrix& data, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (std::size_t idx : order) {
    if (chosen.size() == count) break;
    const bool repeat = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t c) {
      return std::equal(data.row(c).begin(), data.row(c).end(), data.row(idx).begin());
    });
    if (!repeat) chosen.push_back(idx);
  }
  for (std::size_t k = 0; chosen.size() < count; ++k) chosen.push_back(order[k]);

  Matrix centers(count, data.cols());
  for (std::size_t j = 0; j < count; ++j) {
    std::copy(data.row(chosen[j]).begin(), data.row(chosen[j]).end(), centers.row(j).begin());
  }
  return centers;
}

std::size_t argmax(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

}  // namespace ncmseg
