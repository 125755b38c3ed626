#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ncmseg/matrix.hpp"

namespace ncmseg {

struct FcmParams {
  int c = 3;
  double m = 2.0;
  double epsilon = 1e-5;
  int max_iter = 100;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless c >= 1, m > 1, 0 < epsilon < 1 and
  /// max_iter >= 1.
  void validate() const;
};

struct FcmState {
  Matrix centers;      // c x dim
  Matrix memberships;  // N x c, rows sum to 1
  std::vector<double> objective_history;
  int iterations_run = 0;
  bool converged = false;
};

struct FcmFitOptions {
  /// Overrides the seeded choice of starting centers (c x dim).
  std::optional<Matrix> initial_centers;
  /// Called after every iteration with the state so far.
  std::function<void(const FcmState&)> observer;
};

/// Membership update for fixed centers. A point sitting exactly on a center
/// belongs wholly to the lowest-index such center.
Matrix fcm_memberships(const Matrix& data, const Matrix& centers, double m);

/// Center update: u^m-weighted means. A cluster with zero total weight keeps
/// its previous center.
Matrix fcm_centers(const Matrix& data, const Matrix& memberships, double m,
                   const Matrix& previous);

/// sum_i sum_j u_ij^m |x_j - v_i|^2
double fcm_objective(const Matrix& data, const Matrix& memberships,
                     const Matrix& centers, double m);

/// Alternates membership and center updates until the largest membership
/// change between consecutive iterations drops below epsilon.
FcmState fcm_fit(const Matrix& data, const FcmParams& params,
                 const FcmFitOptions& options = {});

/// Hard labels by largest membership (lowest index on ties).
std::vector<int> fcm_assign(const FcmState& state);

}  // namespace ncmseg
