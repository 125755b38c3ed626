#include "ncmseg/ncm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncmseg {

void NcmParams::validate() const {
  if (c < 2) throw std::invalid_argument("ncm: c must be >= 2");
  if (!(m > 1.0)) throw std::invalid_argument("ncm: fuzzifier m must be > 1");
  if (!(w1 > 0.0 && w2 > 0.0 && w3 > 0.0)) throw std::invalid_argument("ncm: weights must be > 0");
  if (!std::isfinite(w1 + w2 + w3)) throw std::invalid_argument("ncm: weights must be finite");
  if (!(delta_reg > 0.0) || !std::isfinite(delta_reg)) {
    throw std::invalid_argument("ncm: delta_reg must be > 0");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("ncm: epsilon must be in (0, 1)");
  if (max_iter < 1) throw std::invalid_argument("ncm: max_iter must be >= 1");
}

NcmParams NcmParams::normalized() const {
  NcmParams out = *this;
  const double sum = w1 + w2 + w3;
  out.w1 = w1 / sum;
  out.w2 = w2 / sum;
  out.w3 = w3 / sum;
  return out;
}

namespace {

// (d^2)^(-1/(m-1)) with the squared distance floored; m = 2 is the common case.
double inverse_power(double d2, double m) {
  d2 = std::max(d2, kMinSquaredDistance);
  return m == 2.0 ? 1.0 / d2 : std::pow(d2, -1.0 / (m - 1.0));
}

std::pair<std::size_t, std::size_t> top_two(std::span<const double> t_row) {
  const std::size_t p = argmax(t_row);
  std::size_t q = p == 0 ? 1 : 0;
  for (std::size_t j = 0; j < t_row.size(); ++j) {
    if (j != p && t_row[j] > t_row[q]) q = j;
  }
  return {p, q};
}

void midpoint(const Matrix& centers, std::size_t p, std::size_t q, std::span<double> out) {
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = 0.5 * (centers(p, d) + centers(q, d));
}

// Ordering seed for the first iteration: T proportional to the clamped
// inverse distances, i.e. ranked by proximity to the starting centers.
Matrix proximity_t(const Matrix& data, const Matrix& centers, double m) {
  Matrix t(data.rows(), centers.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto row = t.row(i);
    double total = 0.0;
    for (std::size_t j = 0; j < centers.rows(); ++j) {
      row[j] = inverse_power(squared_distance(data.row(i), centers.row(j)), m);
      total += row[j];
    }
    for (double& v : row) v /= total;
  }
  return t;
}

bool all_rows_identical(const Matrix& data) {
  for (std::size_t i = 1; i < data.rows(); ++i) {
    if (!std::equal(data.row(i).begin(), data.row(i).end(), data.row(0).begin())) return false;
  }
  return true;
}

}  // namespace

std::vector<double> compute_cimax(std::span<const double> t_row, const Matrix& centers) {
  if (t_row.size() < 2 || t_row.size() != centers.rows()) {
    throw std::invalid_argument("compute_cimax: need a T row of length c >= 2");
  }
  auto [p, q] = top_two(t_row);
  std::vector<double> out(centers.cols());
  midpoint(centers, p, q, out);
  return out;
}

double ncm_objective(const Matrix& data, const Matrix& centers, const Matrix& t,
                     std::span<const double> i_vec, std::span<const double> f_vec,
                     const NcmParams& raw) {
  const NcmParams params = raw.normalized();
  const std::size_t n = data.rows();
  if (t.rows() != n || i_vec.size() != n || f_vec.size() != n || t.cols() != centers.rows() ||
      centers.cols() != data.cols()) {
    throw std::invalid_argument("ncm_objective: inconsistent dimensions");
  }
  const double m = params.m;
  const double delta2 = params.delta_reg * params.delta_reg;
  std::vector<double> cbar(data.cols());
  double determinate = 0.0;
  double ambiguity = 0.0;
  double outlier = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < centers.rows(); ++j) {
      determinate += std::pow(params.w1 * t(i, j), m) * squared_distance(data.row(i), centers.row(j));
    }
    auto [p, q] = top_two(t.row(i));
    midpoint(centers, p, q, cbar);
    ambiguity += std::pow(params.w2 * i_vec[i], m) * squared_distance(data.row(i), cbar);
    outlier += delta2 * std::pow(params.w3 * f_vec[i], m);
  }
  const double total = determinate + ambiguity + outlier;
  if (!std::isfinite(total)) throw std::invalid_argument("ncm_objective: non-finite value");
  return total;
}

double ncm_objective(const Matrix& data, const NcmState& state, const NcmParams& params) {
  return ncm_objective(data, state.centers, state.t, state.i_vec, state.f_vec, params);
}

void ncm_update_memberships(const Matrix& data, const Matrix& centers,
                            const Matrix& t_for_ordering, const NcmParams& params,
                            Matrix& t, std::vector<double>& i_vec, std::vector<double>& f_vec) {
  const std::size_t n = data.rows();
  const std::size_t c = centers.rows();
  t = Matrix(n, c);
  i_vec.assign(n, 0.0);
  f_vec.assign(n, 0.0);
  // The outlier term does not depend on the point.
  const double outlier_raw = inverse_power(params.delta_reg * params.delta_reg, params.m) / params.w3;
  std::vector<double> cbar(data.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto [p, q] = top_two(t_for_ordering.row(i));
    midpoint(centers, p, q, cbar);
    auto row = t.row(i);
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      row[j] = inverse_power(squared_distance(data.row(i), centers.row(j)), params.m) / params.w1;
      total += row[j];
    }
    const double ambiguity_raw = inverse_power(squared_distance(data.row(i), cbar), params.m) / params.w2;
    total += ambiguity_raw + outlier_raw;
    const double k = 1.0 / total;
    for (double& v : row) v *= k;
    i_vec[i] = ambiguity_raw * k;
    f_vec[i] = outlier_raw * k;
  }
}

Matrix ncm_update_centers(const Matrix& data, const Matrix& t, const NcmParams& params,
                          const Matrix& previous) {
  const std::size_t c = t.cols();
  const std::size_t dim = data.cols();
  Matrix centers(c, dim);
  std::vector<double> weight(c, 0.0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      const double w = std::pow(params.w1 * t(i, j), params.m);
      weight[j] += w;
      for (std::size_t d = 0; d < dim; ++d) centers(j, d) += w * data(i, d);
    }
  }
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t d = 0; d < dim; ++d) {
      centers(j, d) = weight[j] > 0.0 ? centers(j, d) / weight[j] : previous(j, d);
    }
  }
  return centers;
}

NcmState ncm_fit(const Matrix& data, const NcmParams& raw, const NcmFitOptions& options) {
  raw.validate();
  require_finite_data(data);
  const NcmParams params = raw.normalized();
  const auto c = static_cast<std::size_t>(params.c);
  const std::size_t n = data.rows();
  if (n < c) throw std::invalid_argument("ncm: fewer points than clusters");

  NcmState state;
  if (all_rows_identical(data)) {
    state.degenerate = true;
    state.centers = Matrix(c, data.cols());
    for (std::size_t j = 0; j < c; ++j) {
      std::copy(data.row(0).begin(), data.row(0).end(), state.centers.row(j).begin());
    }
    state.t = Matrix(n, c, 1.0 / static_cast<double>(c));
    state.i_vec.assign(n, 0.0);
    state.f_vec.assign(n, 0.0);
    return state;
  }

  if (options.initial_centers) {
    if (options.initial_centers->rows() != c || options.initial_centers->cols() != data.cols()) {
      throw std::invalid_argument("ncm: initial centers have the wrong shape");
    }
    state.centers = *options.initial_centers;
  } else {
    state.centers = pick_initial_centers(data, c, params.seed);
  }
  state.t = proximity_t(data, state.centers, params.m);

  Matrix t_next;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    ncm_update_memberships(data, state.centers, state.t, params, t_next, state.i_vec, state.f_vec);
    state.centers = ncm_update_centers(data, t_next, params, state.centers);

    double change = 0.0;
    auto a = t_next.values();
    auto b = state.t.values();
    for (std::size_t k = 0; k < a.size(); ++k) change = std::max(change, std::abs(a[k] - b[k]));
    std::swap(state.t, t_next);

    state.objective_history.push_back(ncm_objective(data, state, params));
    state.iterations_run = iter;
    state.converged = change < params.epsilon;
    if (options.observer) options.observer(state);
    if (state.converged) break;
  }
  return state;
}

std::vector<int> ncm_assign(const NcmState& state) {
  const std::size_t n = state.t.rows();
  const std::size_t c = state.t.cols();
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = state.t.row(i);
    std::size_t best = argmax(row);
    double best_value = row[best];
    if (state.i_vec[i] > best_value) {
      best = c;
      best_value = state.i_vec[i];
    }
    if (state.f_vec[i] > best_value) best = c + 1;
    labels[i] = static_cast<int>(best);
  }
  return labels;
}

}  // namespace ncmseg
