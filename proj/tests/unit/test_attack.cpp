#include <gtest/gtest.h>

#include "linattn/attack.hpp"
#include "linattn/dataset.hpp"
#include "linattn/error.hpp"
#include "linattn/ntk.hpp"
#include "linattn/train.hpp"
#include "oracles.hpp"

using namespace linattn;

namespace {

// Squared loss of a linear model w^T x against target y.
GradientProvider linear_model(const Vector& w) {
  return [w](const Vector& x, const Vector& y) {
    const double r = w.dot(x) - y(0);
    return LossGrad{0.5 * r * r, r * w};
  };
}

NetworkParams toy_net(Eigen::Index m, Eigen::Index d, Eigen::Index outputs, std::uint64_t seed) {
  NetworkParams p = init_network(m, d, 1.0, seed, outputs);
  return p;
}

double linf(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Attack, FgsmBasics) {
  Vector w(3), x(3), y(1);
  w << 1, -2, 0;
  x << 0.1, 0.2, 0.3;
  y << 1.0;
  GradientProvider g = linear_model(w);
  EXPECT_TRUE(fgsm(g, x, y, 0.0) == x);
  GradientProvider zero = [](const Vector& v, const Vector&) { return LossGrad{0.0, Vector::Zero(v.size())}; };
  EXPECT_TRUE(fgsm(zero, x, y, 0.3) == x);
  const double r = w.dot(x) - y(0);
  Vector expected = x;
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double s = r * w(i);
    expected(i) += 0.3 * (s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0));
  }
  EXPECT_LT((fgsm(g, x, y, 0.3) - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Attack, PgdReductions) {
  Vector w = oracle::gaussian(5, 1, 1).col(0), x = oracle::gaussian(5, 1, 2).col(0), y = Vector::Ones(1);
  GradientProvider g = linear_model(w);
  AttackConfig cfg;
  cfg.eps = 0.0;
  EXPECT_TRUE(pgd(g, x, y, cfg) == x);
  cfg.eps = 0.2;
  cfg.alpha = 0.5;
  cfg.iters = 1;
  EXPECT_LT((pgd(g, x, y, cfg) - fgsm(g, x, y, 0.2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Attack, BudgetInvariant) {
  DataMatrix X = generate_sphere_data(6, 5, 3);
  NetworkParams p = toy_net(16, 5, 1, 4);
  for (AttackKind kind : {AttackKind::Fgsm, AttackKind::Pgd, AttackKind::Mim})
    for (Arch arch : {Arch::Relu2L, Arch::MlpAttn}) {
      AttackConfig cfg;
      cfg.kind = kind;
      cfg.eps = 0.07;
      cfg.alpha = 0.03;
      cfg.iters = 10;
      GradientProvider g = network_gradient_provider(p, arch, X, 2);
      Vector xa = run_attack(g, X.row(2), Vector::Ones(1), cfg);
      EXPECT_LE(linf(xa, X.row(2)), 0.07 + 1e-12);
    }
}

TEST(Attack, PgdNonDecreasingOnConvexLoss) {
  Vector w = oracle::gaussian(6, 1, 5).col(0), x = oracle::gaussian(6, 1, 6).col(0), y = Vector::Zero(1);
  GradientProvider g = linear_model(w);
  AttackConfig cfg;
  cfg.eps = 0.3;
  cfg.alpha = 0.01;
  double prev = g(x, y).loss;
  for (int it = 1; it <= 40; ++it) {
    cfg.iters = it;
    const double cur = g(pgd(g, x, y, cfg), y).loss;
    EXPECT_GE(cur, prev - 1e-15);
    prev = cur;
  }
}

TEST(Attack, MimFirstStepFollowsFgsm) {
  Vector w = oracle::gaussian(4, 1, 7).col(0), x = oracle::gaussian(4, 1, 8).col(0), y = Vector::Ones(1);
  GradientProvider g = linear_model(w);
  AttackConfig cfg;
  cfg.kind = AttackKind::Mim;
  cfg.iters = 1;
  cfg.alpha = 0.05;
  cfg.eps = 0.3;
  Vector step = mim(g, x, y, cfg) - x;
  Vector dir = fgsm(g, x, y, 1.0) - x;
  EXPECT_LT((step - 0.05 * dir).cwiseAbs().maxCoeff(), 1e-15);
  cfg.eps = 0.0;
  EXPECT_TRUE(mim(g, x, y, cfg) == x);
  GradientProvider zero = [](const Vector& v, const Vector&) { return LossGrad{0.0, Vector::Zero(v.size())}; };
  cfg.eps = 0.3;
  cfg.iters = 5;
  EXPECT_TRUE(mim(zero, x, y, cfg) == x);
}

TEST(Attack, Deterministic) {
  DataMatrix X = generate_sphere_data(6, 5, 9);
  NetworkParams p = toy_net(16, 5, 1, 10);
  GradientProvider g = network_gradient_provider(p, Arch::MlpAttn, X, 1);
  AttackConfig cfg;
  EXPECT_TRUE(run_attack(g, X.row(1), Vector::Ones(1), cfg) == run_attack(g, X.row(1), Vector::Ones(1), cfg));
}

TEST(Attack, ConfigValidation) {
  AttackConfig cfg;
  cfg.decay = 1.5;
  EXPECT_THROW(validate(cfg), Error);
  cfg = {};
  cfg.iters = 0;
  EXPECT_THROW(validate(cfg), Error);
  EXPECT_EQ(parse_attack_kind("mim"), AttackKind::Mim);
  EXPECT_THROW(parse_attack_kind("cw"), Error);
}

TEST(Attack, GradientMatchesFiniteDifferences) {
  DataMatrix X = generate_sphere_data(7, 6, 11);
  for (Arch arch : {Arch::Relu2L, Arch::MlpAttn})
    for (LossKind loss : {LossKind::Squared, LossKind::CrossEntropy}) {
      const Eigen::Index outs = loss == LossKind::Squared ? 1 : 3;
      NetworkParams p = toy_net(32, 6, outs, 12);
      Vector y = Vector::Zero(outs);
      y(0) = 1.0;
      const Eigen::Index idx = 3;
      // the literal feature: row idx replaced by x, attention over the whole context, then normalized
      auto loss_at = [&](const Vector& x) {
        Matrix rows = X.rows();
        rows.row(idx) = x.transpose();
        Vector f = x;
        if (arch == Arch::MlpAttn) {
          Vector t = Vector::Zero(x.size());
          for (Eigen::Index k = 0; k < rows.rows(); ++k) t += rows.row(k).dot(x) * rows.row(k).transpose();
          f = t / t.norm();
        }
        Vector out = Vector::Zero(outs);
        for (Eigen::Index r = 0; r < p.width(); ++r) {
          const double pre = p.W.row(r).dot(f);
          if (pre > 0) out += pre * p.A.row(r).transpose() / std::sqrt(double(p.width()));
        }
        if (loss == LossKind::Squared) return 0.5 * (out - y).squaredNorm();
        const double mx = out.maxCoeff();
        return mx + std::log((out.array() - mx).exp().sum()) - out(0);
      };
      const Vector x = X.row(idx);
      LossGrad lg = network_loss_grad(p, arch, X, idx, x, y, loss);
      EXPECT_NEAR(lg.loss, loss_at(x), 1e-12);
      Vector fd = oracle::numeric_gradient(loss_at, x);
      EXPECT_LE((lg.grad - fd).norm(), 1e-4 * std::max(1.0, fd.norm())) << to_string(arch);
      EXPECT_LT((network_input_gradient(p, arch, X, idx, y, loss) - lg.grad).norm(), 1e-15);
    }
}

TEST(Attack, DeadUnitsGiveZeroGradient) {
  DataMatrix X = generate_sphere_data(5, 4, 13);
  NetworkParams p = toy_net(8, 4, 1, 14);
  const Vector x = X.row(0);
  for (Eigen::Index r = 0; r < 8; ++r) p.W.row(r) = -std::abs(p.W.row(r).norm()) * x.transpose();
  EXPECT_TRUE(network_input_gradient(p, Arch::Relu2L, X, 0, Vector::Ones(1)).isZero());
}

TEST(Attack, FixedPatternIsLinearMapTranspose) {
  DataMatrix X = generate_sphere_data(5, 4, 15);
  NetworkParams p = toy_net(10, 4, 1, 16);
  const Vector x = X.row(1);
  Vector y = Vector::Constant(1, 0.4);
  Vector on = (p.W * x).unaryExpr([](double v) { return v > 0 ? 1.0 : 0.0; });
  // in this activation region f(x) = v^T x with v = W^T diag(on) a / sqrt(m)
  Vector v = p.W.transpose() * on.cwiseProduct(p.a()) / std::sqrt(10.0);
  const double r = v.dot(x) - y(0);
  EXPECT_LT((network_input_gradient(p, Arch::Relu2L, X, 1, y) - r * v).norm(), 1e-14);
}

TEST(Attack, LeaveOneOutMoment) {
  DataMatrix X = generate_sphere_data(5, 3, 17);
  Matrix M = leave_one_out_moment(X, 2);
  Matrix ref = Matrix::Zero(3, 3);
  for (Eigen::Index k = 0; k < 5; ++k)
    if (k != 2) ref += X.row(k) * X.row(k).transpose();
  EXPECT_LT((M - ref).cwiseAbs().maxCoeff(), 1e-14);
  Vector f = point_feature(Arch::MlpAttn, M, X.row(2));
  Matrix full = arch_features(Arch::MlpAttn, X, X.rows());
  EXPECT_LT((f - full.row(2).transpose()).norm(), 1e-14);
}
