#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "ncmseg/ncm.hpp"
#include "oracles.hpp"

using namespace ncmseg;

namespace {

Matrix clustered_points(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 0.6);
  std::uniform_int_distribution<int> blob(0, 2);
  Matrix data(n, 1);
  for (std::size_t i = 0; i < n; ++i) data(i, 0) = 3.0 * blob(rng) + g(rng);
  return data;
}

oracle::Table to_table(const Matrix& m) {
  oracle::Table t(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) t[i].assign(m.row(i).begin(), m.row(i).end());
  return t;
}

}  // namespace

TEST(NcmParams, Validation) {
  EXPECT_NO_THROW(NcmParams{}.validate());
  auto bad = [](auto mutate) {
    NcmParams p;
    mutate(p);
    return p;
  };
  EXPECT_THROW(bad([](NcmParams& p) { p.c = 1; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.m = 1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.w2 = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.w3 = -1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.delta_reg = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.epsilon = 1.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(bad([](NcmParams& p) { p.max_iter = 0; }).validate(), std::invalid_argument);
}

TEST(NcmParams, NormalizedWeightsSumToOne) {
  NcmParams p;
  p.w1 = 3.0;
  p.w2 = 1.0;
  p.w3 = 1.0;
  NcmParams n = p.normalized();
  EXPECT_DOUBLE_EQ(n.w1, 0.6);
  EXPECT_DOUBLE_EQ(n.w2, 0.2);
  EXPECT_DOUBLE_EQ(n.w3, 0.2);
}

TEST(NcmFit, ScaledWeightsGiveTheSameFit) {
  std::mt19937_64 rng(8);
  Matrix data = clustered_points(rng, 60);
  NcmParams a;
  NcmParams b = a;
  b.w1 *= 8.0;
  b.w2 *= 8.0;
  b.w3 *= 8.0;
  NcmState sa = ncm_fit(data, a);
  NcmState sb = ncm_fit(data, b);
  for (std::size_t k = 0; k < sa.centers.values().size(); ++k) {
    EXPECT_NEAR(sa.centers.values()[k], sb.centers.values()[k], 1e-12);
  }
}

TEST(NcmObjective, ZeroWhenEverythingIsDeterminateAndOnCenter) {
  Matrix data = Matrix::column({0.0, 10.0});
  Matrix centers = Matrix::column({0.0, 10.0});
  Matrix t(2, 2, std::vector<double>{1.0, 0.0, 0.0, 1.0});
  std::vector<double> zeros(2, 0.0);
  EXPECT_EQ(ncm_objective(data, centers, t, zeros, zeros, NcmParams{2}), 0.0);
}

TEST(NcmObjective, MatchesTermByTermSum) {
  const std::vector<double> x{0.0, 1.0, 9.0, 10.0, 4.0};
  const std::vector<double> v{0.5, 5.0, 9.5};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix t(x.size(), v.size());
  std::vector<double> i_vec(x.size()), f_vec(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0.0;
    std::vector<double> raw(v.size() + 2);
    for (double& r : raw) s += (r = u(rng));
    for (std::size_t j = 0; j < v.size(); ++j) t(i, j) = raw[j] / s;
    i_vec[i] = raw[v.size()] / s;
    f_vec[i] = raw[v.size() + 1] / s;
  }
  NcmParams p;
  p.c = 3;
  p.m = 2.3;
  p.w1 = 2.0;
  p.w2 = 1.0;
  p.w3 = 0.5;
  p.delta_reg = 1.7;
  EXPECT_NEAR(ncm_objective(Matrix::column(x), Matrix::column(v), t, i_vec, f_vec, p),
              oracle::ncm_cost(x, v, to_table(t), i_vec, f_vec, p.m, p.w1, p.w2, p.w3, p.delta_reg), 1e-12);
}

TEST(ComputeCimax, MidpointOfTheTwoStrongestClusters) {
  Matrix centers = Matrix::column({0.0, 10.0, 20.0});
  EXPECT_EQ(compute_cimax(std::vector<double>{0.7, 0.2, 0.1}, centers), std::vector<double>{5.0});
  EXPECT_EQ(compute_cimax(std::vector<double>{0.1, 0.3, 0.6}, centers), std::vector<double>{15.0});
  EXPECT_EQ(compute_cimax(std::vector<double>{0.2, 0.2, 0.2}, centers), std::vector<double>{5.0});
  EXPECT_EQ(compute_cimax(std::vector<double>{0.1, 0.6, 0.3}, centers), std::vector<double>{15.0});
  EXPECT_THROW(compute_cimax(std::vector<double>{1.0}, Matrix::column({0.0})), std::invalid_argument);
}

TEST(NcmAssign, PicksLargestOfTAmbiguityOutlier) {
  NcmState s;
  s.t = Matrix(4, 2, std::vector<double>{0.2, 0.3, 0.1, 0.1, 0.2, 0.2, 0.6, 0.1});
  s.i_vec = {0.4, 0.2, 0.2, 0.2};
  s.f_vec = {0.1, 0.6, 0.4, 0.1};
  EXPECT_EQ(ncm_assign(s), (std::vector<int>{2, 3, 3, 0}));
  // Ties resolve T before I before F.
  s.t = Matrix(2, 2, std::vector<double>{0.3, 0.3, 0.2, 0.1});
  s.i_vec = {0.3, 0.35};
  s.f_vec = {0.1, 0.35};
  EXPECT_EQ(ncm_assign(s), (std::vector<int>{0, 2}));
}

TEST(NcmFit, TwoPairFixture) {
  NcmParams p;
  p.c = 2;
  NcmState s = ncm_fit(Matrix::column({0.0, 0.0, 10.0, 10.0}), p);
  std::vector<double> c(s.centers.values().begin(), s.centers.values().end());
  std::sort(c.begin(), c.end());
  EXPECT_NEAR(c[0], 0.0, 0.5);
  EXPECT_NEAR(c[1], 10.0, 0.5);
  auto labels = ncm_assign(s);
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_EQ(labels[2], labels[3]);
  EXPECT_NE(labels[0], labels[2]);
  EXPECT_LT(labels[0], 2);
  EXPECT_LT(labels[2], 2);
}

TEST(NcmFit, FarPointIsAnOutlier) {
  NcmParams p;
  p.c = 2;
  p.delta_reg = 5.0;
  NcmFitOptions opts;
  opts.initial_centers = Matrix::column({0.0, 10.0});
  NcmState s = ncm_fit(Matrix::column({0.0, 0.0, 0.0, 10.0, 10.0, 10.0, 1000.0}), p, opts);
  const std::size_t far = 6;
  EXPECT_GT(s.f_vec[far], s.t(far, 0));
  EXPECT_GT(s.f_vec[far], s.t(far, 1));
  EXPECT_GT(s.f_vec[far], s.i_vec[far]);
  EXPECT_EQ(ncm_assign(s)[far], 3);
  for (std::size_t i = 0; i < far; ++i) EXPECT_LT(ncm_assign(s)[i], 2);
}

TEST(NcmFit, LargeDeltaAbsorbsTheFarPoint) {
  NcmParams p;
  p.c = 2;
  p.delta_reg = 1e5;
  NcmFitOptions opts;
  opts.initial_centers = Matrix::column({0.0, 10.0});
  NcmState s = ncm_fit(Matrix::column({0.0, 0.0, 0.0, 10.0, 10.0, 10.0, 1000.0}), p, opts);
  EXPECT_NE(ncm_assign(s)[6], 3);
}

TEST(NcmMemberships, OutlierShareFallsAsDeltaGrows) {
  Matrix data = Matrix::column({0.0, 2.0, 5.0, 40.0});
  Matrix centers = Matrix::column({0.0, 4.0});
  Matrix order(4, 2, 0.5);
  double previous = 2.0;
  for (double delta : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    NcmParams p;
    p.c = 2;
    p.delta_reg = delta;
    p = p.normalized();
    Matrix t;
    std::vector<double> i_vec, f_vec;
    ncm_update_memberships(data, centers, order, p, t, i_vec, f_vec);
    EXPECT_LT(f_vec[3], previous) << "delta " << delta;
    previous = f_vec[3];
  }
}

TEST(NcmMemberships, RowsSumToOne) {
  std::mt19937_64 rng(6);
  Matrix data = clustered_points(rng, 80);
  NcmParams p;
  NcmFitOptions opts;
  opts.observer = [](const NcmState& s) {
    for (std::size_t i = 0; i < s.t.rows(); ++i) {
      double sum = s.i_vec[i] + s.f_vec[i];
      for (double v : s.t.row(i)) sum += v;
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  };
  ncm_fit(data, p, opts);
}

TEST(NcmFit, IdenticalPointsAreDegenerate) {
  NcmState s = ncm_fit(Matrix::column(std::vector<double>(10, 0.4)), NcmParams{});
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.iterations_run, 0);
  for (double v : s.centers.values()) EXPECT_EQ(v, 0.4);
  for (double v : s.t.values()) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  for (double v : s.i_vec) EXPECT_EQ(v, 0.0);
  for (double v : s.f_vec) EXPECT_EQ(v, 0.0);
}

TEST(NcmFit, Errors) {
  EXPECT_THROW(ncm_fit(Matrix::column({1.0, 2.0}), NcmParams{}), std::invalid_argument);
  EXPECT_THROW(ncm_fit(Matrix(), NcmParams{}), std::invalid_argument);
  NcmFitOptions opts;
  opts.initial_centers = Matrix::column({1.0, 2.0});
  EXPECT_THROW(ncm_fit(Matrix::column({1.0, 2.0, 3.0}), NcmParams{}, opts), std::invalid_argument);
}

TEST(NcmFit, DeterministicForSeed) {
  std::mt19937_64 rng(1);
  Matrix data = clustered_points(rng, 100);
  NcmParams p;
  p.seed = 99;
  NcmState a = ncm_fit(data, p);
  NcmState b = ncm_fit(data, p);
  EXPECT_EQ(a.centers, b.centers);
  EXPECT_EQ(a.t, b.t);
  EXPECT_EQ(a.objective_history, b.objective_history);
}

TEST(NcmFit, RelabelingStartCentersPermutesColumns) {
  std::mt19937_64 rng(12);
  Matrix data = clustered_points(rng, 90);
  const std::vector<double> start{-0.5, 2.5, 6.5};
  const std::vector<std::size_t> perm{2, 0, 1};
  std::vector<double> permuted(3);
  for (std::size_t j = 0; j < 3; ++j) permuted[j] = start[perm[j]];
  NcmFitOptions oa, ob;
  oa.initial_centers = Matrix::column(start);
  ob.initial_centers = Matrix::column(permuted);
  NcmParams p;
  NcmState a = ncm_fit(data, p, oa);
  NcmState b = ncm_fit(data, p, ob);
  ASSERT_EQ(a.iterations_run, b.iterations_run);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b.centers(j, 0), a.centers(perm[j], 0), 1e-12);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(b.t(i, j), a.t(i, perm[j]), 1e-12);
    EXPECT_NEAR(b.i_vec[i], a.i_vec[i], 1e-12);
    EXPECT_NEAR(b.f_vec[i], a.f_vec[i], 1e-12);
  }
}

TEST(NcmFit, MatchesBruteForceOracle) {
  const std::vector<double> x{0.0, 0.0, 10.0, 10.0, 4.0, 6.5, 30.0};
  for (const std::vector<double>& start : {std::vector<double>{2.0, 7.0}, std::vector<double>{1.0, 5.0, 9.0}}) {
    NcmParams p;
    p.c = static_cast<int>(start.size());
    p.m = 2.2;
    p.w1 = 0.7;
    p.w2 = 0.2;
    p.w3 = 0.1;
    p.delta_reg = 3.0;
    p.epsilon = 1e-15;
    p.max_iter = 10;
    NcmFitOptions opts;
    opts.initial_centers = Matrix::column(start);
    std::vector<NcmState> iterates;
    opts.observer = [&](const NcmState& s) { iterates.push_back(s); };
    ncm_fit(Matrix::column(x), p, opts);
    auto ref = oracle::ncm(x, start, p.m, p.w1, p.w2, p.w3, p.delta_reg, 10);
    ASSERT_FALSE(iterates.empty());
    // After convergence the final state must stay a fixed point of the oracle.
    for (std::size_t it = 0; it < ref.size(); ++it) {
      const NcmState& s = iterates[std::min(it, iterates.size() - 1)];
      for (std::size_t k = 0; k < start.size(); ++k) {
        EXPECT_NEAR(s.centers(k, 0), ref[it].centers[k], 1e-9);
      }
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (std::size_t k = 0; k < start.size(); ++k) EXPECT_NEAR(s.t(j, k), ref[it].t[j][k], 1e-9);
        EXPECT_NEAR(s.i_vec[j], ref[it].i[j], 1e-9);
        EXPECT_NEAR(s.f_vec[j], ref[it].f[j], 1e-9);
      }
      EXPECT_NEAR(s.objective_history.back(),
                  oracle::ncm_cost(x, ref[it].centers, ref[it].t, ref[it].i, ref[it].f, p.m, p.w1, p.w2, p.w3,
                                   p.delta_reg),
                  1e-9);
    }
  }
}
