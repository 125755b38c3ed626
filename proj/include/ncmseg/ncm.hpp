#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ncmseg/matrix.hpp"

namespace ncmseg {

/// Neutrosophic c-means parameters. The three weights favour determinate,
/// ambiguity and outlier membership respectively and are used after
/// normalization to unit sum.
struct NcmParams {
  int c = 3;
  double m = 2.0;
  double w1 = 0.75;
  double w2 = 0.125;
  double w3 = 0.125;
  double delta_reg = 0.5;
  double epsilon = 1e-5;
  int max_iter = 100;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on c < 2, m <= 1, non-positive weights or
  /// delta_reg, epsilon outside (0, 1), or max_iter < 1.
  void validate() const;
  /// Copy with w1 + w2 + w3 == 1.
  NcmParams normalized() const;
};

struct NcmState {
  Matrix centers;              // c x dim
  Matrix t;                    // N x c determinate memberships
  std::vector<double> i_vec;   // ambiguity membership per point
  std::vector<double> f_vec;   // outlier membership per point
  std::vector<double> objective_history;
  int iterations_run = 0;
  bool converged = false;
  /// All points identical: no clustering exists. Centers coincide, T is
  /// uniform and I = F = 0.
  bool degenerate = false;

  std::size_t cluster_count() const noexcept { return centers.rows(); }
};

struct NcmFitOptions {
  std::optional<Matrix> initial_centers;
  std::function<void(const NcmState&)> observer;
};

/// Squared distances below this floor are clamped before the negative
/// power, so coincident points get near-total membership without a
/// division by zero.
inline constexpr double kMinSquaredDistance = 1e-12;

/// Midpoint of the centers with the largest and second-largest T in the
/// row (lowest index wins ties).
std::vector<double> compute_cimax(std::span<const double> t_row, const Matrix& centers);

/// The three-term NCM cost: weighted determinate distances, weighted
/// distances to each point's two-nearest-cluster midpoint, and the
/// delta-scaled outlier penalty.
double ncm_objective(const Matrix& data, const Matrix& centers, const Matrix& t,
                     std::span<const double> i_vec, std::span<const double> f_vec,
                     const NcmParams& params);
double ncm_objective(const Matrix& data, const NcmState& state, const NcmParams& params);

/// Membership update for fixed centers, with the midpoint targets taken
/// from the ordering of `t_for_ordering` (the previous T).
void ncm_update_memberships(const Matrix& data, const Matrix& centers,
                            const Matrix& t_for_ordering, const NcmParams& params,
                            Matrix& t, std::vector<double>& i_vec, std::vector<double>& f_vec);

/// Center update: (w1 T)^m-weighted means.
Matrix ncm_update_centers(const Matrix& data, const Matrix& t, const NcmParams& params,
                          const Matrix& previous);

/// Runs the alternating update until max |T(k+1) - T(k)| < epsilon or
/// max_iter iterations.
NcmState ncm_fit(const Matrix& data, const NcmParams& params, const NcmFitOptions& options = {});

/// 0..c-1 determinate, c ambiguity, c+1 outlier. Ties resolve in the order
/// T_1..T_c, I, F.
std::vector<int> ncm_assign(const NcmState& state);

}  // namespace ncmseg
