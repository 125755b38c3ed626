#include "ncmseg/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ncmseg {

void FcmParams::validate() const {
  if (c < 1) throw std::invalid_argument("fcm: c must be >= 1");
  if (!(m > 1.0)) throw std::invalid_argument("fcm: fuzzifier m must be > 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("fcm: epsilon must be in (0, 1)");
  if (max_iter < 1) throw std::invalid_argument("fcm: max_iter must be >= 1");
}

Matrix fcm_memberships(const Matrix& data, const Matrix& centers, double m) {
  const std::size_t n = data.rows();
  const std::size_t c = centers.rows();
  const double exponent = -1.0 / (m - 1.0);  // on squared distances
  Matrix u(n, c);
  std::vector<double> d2(c);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t zero_at = c;
    for (std::size_t k = 0; k < c; ++k) {
      d2[k] = squared_distance(data.row(i), centers.row(k));
      if (d2[k] == 0.0 && zero_at == c) zero_at = k;
    }
    auto row = u.row(i);
    if (zero_at < c) {
      row[zero_at] = 1.0;
      continue;
    }
    // u_ik = 1 / sum_l (d_ik / d_il)^(2/(m-1)) = d_ik^e / sum_l d_il^e
    double total = 0.0;
    for (std::size_t k = 0; k < c; ++k) {
      row[k] = std::pow(d2[k], exponent);
      total += row[k];
    }
    for (std::size_t k = 0; k < c; ++k) row[k] /= total;
  }
  return u;
}

Matrix fcm_centers(const Matrix& data, const Matrix& memberships, double m,
                   const Matrix& previous) {
  const std::size_t n = data.rows();
  const std::size_t c = memberships.cols();
  const std::size_t dim = data.cols();
  Matrix centers(c, dim);
  std::vector<double> weight(c, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      const double w = std::pow(memberships(i, k), m);
      weight[k] += w;
      for (std::size_t d = 0; d < dim; ++d) centers(k, d) += w * data(i, d);
    }
  }
  for (std::size_t k = 0; k < c; ++k) {
    for (std::size_t d = 0; d < dim; ++d) {
      centers(k, d) = weight[k] > 0.0 ? centers(k, d) / weight[k] : previous(k, d);
    }
  }
  return centers;
}

double fcm_objective(const Matrix& data, const Matrix& memberships,
                     const Matrix& centers, double m) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t k = 0; k < centers.rows(); ++k) {
      total += std::pow(memberships(i, k), m) * squared_distance(data.row(i), centers.row(k));
    }
  }
  return total;
}

FcmState fcm_fit(const Matrix& data, const FcmParams& params, const FcmFitOptions& options) {
  params.validate();
  require_finite_data(data);
  const auto c = static_cast<std::size_t>(params.c);
  if (data.rows() < c) throw std::invalid_argument("fcm: fewer points than clusters");

  FcmState state;
  if (options.initial_centers) {
    if (options.initial_centers->rows() != c || options.initial_centers->cols() != data.cols()) {
      throw std::invalid_argument("fcm: initial centers have the wrong shape");
    }
    state.centers = *options.initial_centers;
  } else {
    state.centers = pick_initial_centers(data, c, params.seed);
  }

  for (int iter = 1; iter <= params.max_iter; ++iter) {
    Matrix u = fcm_memberships(data, state.centers, params.m);
    state.centers = fcm_centers(data, u, params.m, state.centers);

    double change = std::numeric_limits<double>::infinity();
    if (iter > 1) {
      change = 0.0;
      auto a = u.values();
      auto b = state.memberships.values();
      for (std::size_t k = 0; k < a.size(); ++k) change = std::max(change, std::abs(a[k] - b[k]));
    }
    state.memberships = std::move(u);
    state.objective_history.push_back(
        fcm_objective(data, state.memberships, state.centers, params.m));
    state.iterations_run = iter;
    state.converged = change < params.epsilon;
    if (options.observer) options.observer(state);
    if (state.converged) break;
  }
  return state;
}

std::vector<int> fcm_assign(const FcmState& state) {
  std::vector<int> labels(state.memberships.rows());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i] = static_cast<int>(argmax(state.memberships.row(i)));
  }
  return labels;
}

}  // namespace ncmseg
