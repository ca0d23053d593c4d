#include <gtest/gtest.h>

#include <numbers>

#include "linattn/attention.hpp"
#include "linattn/dataset.hpp"
#include "linattn/error.hpp"
#include "linattn/ntk.hpp"
#include "linattn/train.hpp"
#include "oracles.hpp"

using namespace linattn;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

NetworkParams gaussian_net(Eigen::Index m, Eigen::Index d, std::uint64_t seed) {
  NetworkParams p;
  p.W = oracle::gaussian(m, d, seed);
  p.A = Matrix::Ones(m, 1);
  p.init_scale = 1.0;
  return p;
}

}  // namespace

TEST(Ntk, SingleUnitEntries) {
  Matrix F = oracle::unit_rows(oracle::gaussian(6, 4, 1));
  Matrix K = empirical_ntk(gaussian_net(1, 4, 2), F).K;
  Matrix ip = F * F.transpose();
  for (Eigen::Index i = 0; i < 6; ++i)
    for (Eigen::Index j = 0; j < 6; ++j) EXPECT_TRUE(K(i, j) == 0.0 || K(i, j) == ip(i, j));
}

TEST(Ntk, EmpiricalIsGramOfGradients) {
  Matrix F = oracle::gaussian(5, 3, 3);
  NetworkParams p = gaussian_net(7, 3, 4);
  Matrix K = empirical_ntk(p, F).K;
  // gradient of (1/sqrt m) sum_r relu(w_r . x) wrt W, flattened
  Matrix J(5, 7 * 3);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index r = 0; r < 7; ++r) {
      const double on = p.W.row(r).dot(F.row(i)) > 0 ? 1.0 : 0.0;
      for (Eigen::Index c = 0; c < 3; ++c) J(i, r * 3 + c) = on * F(i, c) / std::sqrt(7.0);
    }
  EXPECT_LT((K - J * J.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Matrix> es(K);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(Ntk, PermutationInvariance) {
  Matrix F = oracle::gaussian(5, 3, 5);
  NetworkParams p = gaussian_net(9, 3, 6);
  NetworkParams q = p;
  for (Eigen::Index r = 0; r < 9; ++r) q.W.row(r) = p.W.row(8 - r);
  EXPECT_LT((empirical_ntk(p, F).K - empirical_ntk(q, F).K).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Ntk, EmpiricalShapeError) {
  EXPECT_EQ(code_of([] { empirical_ntk(gaussian_net(3, 4, 1), Matrix::Ones(2, 5)); }), ErrorCode::ShapeError);
}

TEST(Ntk, ClosedFormSpecialAngles) {
  Matrix F(3, 2);
  F << 1, 0, 0, 1, 0.5, std::sqrt(3.0) / 2.0;
  Matrix K = infinite_relu_ntk(F).K;
  EXPECT_NEAR(K(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(K(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(K(0, 2), 0.5 / 3.0, 1e-15);
  Matrix Z = F;
  Z.row(1).setZero();
  EXPECT_EQ(code_of([&] { infinite_relu_ntk(Z); }), ErrorCode::DegenerateRow);
}

TEST(Ntk, ClosedFormMatchesIndependentSampling) {
  Matrix F(2, 2);
  F << 1, 0, 0.5, std::sqrt(3.0) / 2.0;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  const int N = 1000000;
  int both = 0;
  for (int s = 0; s < N; ++s) {
    const double w0 = nd(rng), w1 = nd(rng);
    if (w0 * F(0, 0) + w1 * F(0, 1) > 0 && w0 * F(1, 0) + w1 * F(1, 1) > 0) ++both;
  }
  const double p = double(both) / N;
  const double se = std::sqrt(p * (1 - p) / N) * 0.5;
  EXPECT_LE(std::abs(p * 0.5 - infinite_relu_ntk(F).K(0, 1)), 3 * se);
}

TEST(Ntk, ClosedFormIsPsd) {
  Matrix F = oracle::gaussian(20, 5, 8);
  Eigen::SelfAdjointEigenSolver<Matrix> es(infinite_relu_ntk(F).K);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
}

TEST(Ntk, MonteCarlo) {
  Matrix F = oracle::gaussian(4, 3, 9);
  McKernel one = mc_ntk(F, 1, 3);
  Matrix ip = F * F.transpose();
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j)
      EXPECT_TRUE(one.kernel.K(i, j) == 0.0 || std::abs(one.kernel.K(i, j) - ip(i, j)) < 1e-15);
  EXPECT_TRUE(mc_ntk(F, 5000, 4).kernel.K == mc_ntk(F, 5000, 4).kernel.K);
  McKernel big = mc_ntk(F, 200000, 5);
  for (Eigen::Index i = 0; i < 4; ++i)
    EXPECT_NEAR(big.kernel.K(i, i), 0.5 * ip(i, i), 4 * big.std_error(i, i) + 1e-12);
  Matrix ref = infinite_relu_ntk(F).K;
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(big.kernel.K(i, j), ref(i, j), 4 * big.std_error(i, j) + 1e-12);
}

TEST(Ntk, EmpiricalConvergesToClosedForm) {
  Matrix F = oracle::unit_rows(oracle::gaussian(4, 3, 10));
  NetworkParams p = gaussian_net(100000, 3, 11);
  Matrix K = empirical_ntk(p, F).K, ref = infinite_relu_ntk(F).K, ip = F * F.transpose();
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      const double pr = ref(i, j) / (ip(i, j) == 0 ? 1 : ip(i, j));
      const double sigma = std::sqrt(std::max(pr * (1 - pr), 1e-12) / 1e5) * std::abs(ip(i, j));
      EXPECT_LE(std::abs(K(i, j) - ref(i, j)), 3 * sigma + 1e-12);
    }
}

TEST(Ntk, SequentialReducesOnOrthonormalData) {
  DataMatrix X(Matrix::Identity(3, 4));
  EXPECT_LT((sequential_ntk(X, false).K - infinite_relu_ntk(X.rows()).K).cwiseAbs().maxCoeff(), 1e-15);
  DataMatrix Y = generate_sphere_data(5, 4, 2);
  Matrix raw = sequential_ntk(Y, false).K;
  Matrix F = linearized_attention(Y).rows;
  for (Eigen::Index i = 0; i < 5; ++i) {
    EXPECT_NEAR(raw(i, i), 0.5 * F.row(i).squaredNorm(), 1e-12);
    EXPECT_NEAR(sequential_ntk(Y, true).K(i, i), 0.5, 1e-14);
  }
}

TEST(Ntk, Distance) {
  Matrix a = Matrix::Random(3, 2);
  EXPECT_EQ(ntk_distance(a, a), 0.0);
  Matrix b = a;
  b(1, 0) += 1.0;
  EXPECT_NEAR(ntk_distance(a, b), 1.0, 1e-15);
  EXPECT_NEAR(ntk_distance(Matrix::Zero(2, 2), Matrix::Constant(2, 2, 0.5)), 1.0, 1e-15);
  EXPECT_EQ(code_of([&] { ntk_distance(a, Matrix::Zero(2, 2)); }), ErrorCode::ShapeError);
}

TEST(Ntk, ForwardSingleUnit) {
  NetworkParams p;
  p.W = Matrix(1, 2);
  p.W << 2, -1;
  p.A = Matrix::Ones(1, 1);
  Matrix x(2, 2);
  x << 1, 1, -1, 0;
  Matrix out = network_forward(p, x);
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_EQ(out(1, 0), 0.0);
}

TEST(Ntk, ArchFeatures) {
  DataMatrix X = generate_sphere_data(6, 4, 3);
  Matrix q = oracle::gaussian(2, 4, 4);
  EXPECT_TRUE(arch_features(Arch::Relu2L, X, q) == q);
  Matrix f = arch_features(Arch::MlpAttn, X, q);
  Matrix expected = q * X.rows().transpose() * X.rows();
  for (Eigen::Index i = 0; i < 2; ++i)
    EXPECT_LT((f.row(i) - expected.row(i) / expected.row(i).norm()).norm(), 1e-14);
}
