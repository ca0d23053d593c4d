#include "linattn/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "linattn/error.hpp"
#include "linattn/ntk.hpp"
#include "linattn/spectral.hpp"

namespace linattn {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void check_lambda(double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), ErrorCode::BadLambda, "lambda must be positive");
}

Vector random_direction(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vector v(d);
  do {
    for (Eigen::Index i = 0; i < d; ++i) v(i) = nd(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

Matrix regularized_inverse(const Matrix& K, double lambda) {
  const Eigen::Index n = K.rows();
  Matrix A = K + lambda * Matrix::Identity(n, n);
  Eigen::LDLT<Matrix> ldlt(A);
  return ldlt.solve(Matrix::Identity(n, n));
}

}  // namespace

StabilityReport stability_check(const Matrix& K, double lambda) {
  check_lambda(lambda);
  require(K.rows() == K.cols() && K.rows() > 0, ErrorCode::ShapeError, "kernel must be square");
  StabilityReport r;
  const Eigen::Index n = K.rows();
  r.scale = K.norm();
  const double ref = r.scale > 0.0 ? r.scale : 1.0;

  r.symmetry_residual = (K - K.transpose()).norm();
  Matrix Ks = 0.5 * (K + K.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(Ks, Eigen::EigenvaluesOnly);
  r.min_eig = es.eigenvalues().minCoeff();
  const double top = es.eigenvalues().maxCoeff() + lambda;
  const double bottom = r.min_eig + lambda;
  r.cond_number = bottom > 0.0 ? top / bottom : INFINITY;

  LMatrix A = K.cast<long double>();
  A.diagonal().array() += static_cast<long double>(lambda);
  Eigen::PartialPivLU<LMatrix> lu(A);
  LMatrix Ainv = lu.inverse();
  LMatrix R = Ainv * A - LMatrix::Identity(n, n);
  r.inversion_residual = static_cast<double>(R.norm());

  r.min_eig_ok = r.min_eig > -1e-12;
  r.cond_ok = r.cond_number < 1e12;
  r.inversion_ok = r.inversion_residual < 1e-12 * ref;
  r.symmetry_ok = r.symmetry_residual < 1e-12 * ref;
  r.passed = r.min_eig_ok && r.cond_ok && r.inversion_ok && r.symmetry_ok;
  return r;
}

KRRModel krr_fit(const KernelMatrix& K, const Matrix& Y, double lambda) {
  check_lambda(lambda);
  require(K.K.rows() == K.K.cols() && K.K.rows() == Y.rows(), ErrorCode::ShapeError,
          "kernel and targets disagree in size");
  StabilityReport st = stability_check(K.K, lambda);
  require(st.passed, ErrorCode::IllConditioned,
          "stability check failed (min_eig=" + std::to_string(st.min_eig) +
              ", cond=" + std::to_string(st.cond_number) + ")");
  KRRModel model;
  model.lambda = lambda;
  model.kernel_kind = K.kind;
  model.reg_inverse = regularized_inverse(K.K, lambda);
  Matrix A = K.K + lambda * Matrix::Identity(K.K.rows(), K.K.cols());
  model.alpha = Eigen::LDLT<Matrix>(A).solve(Y);
  model.y_norm = Y.norm();
  return model;
}

Matrix krr_predict(const Matrix& k_test, const KRRModel& model) {
  require(k_test.cols() == model.alpha.rows(), ErrorCode::ShapeError, "cross-kernel width does not match model");
  return k_test * model.alpha;
}

Matrix loo_influence_batch(const Matrix& K, const Matrix& Y, double lambda, const Matrix& K_test,
                           const Matrix& Y_test) {
  check_lambda(lambda);
  const Eigen::Index n = K.rows();
  require(K.cols() == n && Y.rows() == n, ErrorCode::ShapeError, "kernel and targets disagree in size");
  require(K_test.cols() == n && K_test.rows() == Y_test.rows() && Y_test.cols() == Y.cols(),
          ErrorCode::ShapeError, "test kernel or targets have the wrong shape");
  require(n >= 2, ErrorCode::CannotLeaveOneOut, "leave-one-out needs at least two points");
  Matrix B = regularized_inverse(K, lambda);
  Matrix alpha = B * Y;
  Matrix F = K_test * alpha;        // T x C
  Matrix KB = K_test * B;           // T x n, entry (t, i) = k_t^T B_{:,i}
  const Eigen::Index T = K_test.rows();
  Matrix out(n, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::RowVectorXd r = F.row(t) - Y_test.row(t);
    const double base = r.squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::RowVectorXd loo = r - (KB(t, i) / B(i, i)) * alpha.row(i);
      out(i, t) = 0.5 * (loo.squaredNorm() - base);
    }
  }
  return out;
}

InfluenceVector loo_influence(const Matrix& K, const Matrix& Y, double lambda, const Vector& k_test,
                              const Vector& y_test) {
  InfluenceVector iv;
  iv.scores = loo_influence_batch(K, Y, lambda, k_test.transpose(), y_test.transpose()).col(0);
  return iv;
}

BoundCheck resolvent_bound_check(const Matrix& K, const Matrix& dK, double lambda) {
  check_lambda(lambda);
  require(K.rows() == dK.rows() && K.cols() == dK.cols(), ErrorCode::ShapeError, "perturbation shape differs");
  const double eps = spectral_norm(dK);
  require(eps < lambda, ErrorCode::BoundInapplicable, "perturbation norm must be below lambda");
  BoundCheck c;
  c.measured = spectral_norm(regularized_inverse(K, lambda) - regularized_inverse(K + dK, lambda));
  c.bound = eps / (lambda * (lambda - eps));
  c.holds = c.measured <= c.bound * (1.0 + 1e-12) + 1e-15;
  return c;
}

double intrinsic_sensitivity(double L_K, double y_norm, double lambda) {
  check_lambda(lambda);
  require(L_K >= 0.0 && y_norm >= 0.0, ErrorCode::InvalidArgument, "L_K and ||y|| must be non-negative");
  return L_K * y_norm / (lambda * lambda);
}

KernelEvaluator::KernelEvaluator(Kind kind, DataMatrix context) : kind_(kind), context_(std::move(context)) {
  if (kind_ == Kind::Attention) {
    Matrix C = context_.rows().transpose() * context_.rows();
    M_ = C * C;
  }
}

double KernelEvaluator::eval(const Vector& x, const Vector& y) const {
  switch (kind_) {
    case Kind::Constant: return 1.0;
    case Kind::Gram: return x.dot(y);
    case Kind::Attention: return x.dot(M_ * y);
    case Kind::ArcCos: return relu_ntk_entry(x, y);
  }
  return 0.0;
}

Vector KernelEvaluator::row(const Vector& x) const {
  const Matrix& X = context_.rows();
  require(x.size() == X.cols(), ErrorCode::ShapeError, "query dimension does not match context");
  if (kind_ == Kind::Gram) return X * x;
  if (kind_ == Kind::Attention) return X * (M_ * x);
  Vector k(X.rows());
  for (Eigen::Index j = 0; j < X.rows(); ++j) k(j) = eval(x, X.row(j).transpose());
  return k;
}

Matrix KernelEvaluator::train_kernel() const {
  const Matrix& X = context_.rows();
  if (kind_ == Kind::Gram) return X * X.transpose();
  if (kind_ == Kind::Attention) {
    Matrix G = X * X.transpose();
    return G * G * G;
  }
  Matrix K(X.rows(), X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = eval(X.row(i).transpose(), X.row(j).transpose());
  return K;
}

Vector KernelEvaluator::entry_bounds() const {
  const Matrix& X = context_.rows();
  const Vector norms = X.rowwise().norm();
  switch (kind_) {
    case Kind::Constant: return Vector::Zero(X.rows());
    case Kind::Gram: return norms;
    case Kind::ArcCos: return norms * ((std::numbers::pi + 1.0) / (2.0 * std::numbers::pi));
    case Kind::Attention: {
      // |delta^T (X^T X)^2 x_j| <= ||delta|| max_k ||x_k|| ||[G^2]_{:,j}||_1
      Matrix G = X * X.transpose();
      Matrix G2 = G * G;
      return G2.cwiseAbs().colwise().sum().transpose() * norms.maxCoeff();
    }
  }
  return Vector::Zero(X.rows());
}

double KernelEvaluator::lipschitz_bound() const { return entry_bounds().norm(); }

double KernelEvaluator::nominal_lipschitz() const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Attention: {
      const Matrix& X = context_.rows();
      return double(X.rows()) * spectral_norm(X * X.transpose());
    }
    default: return 1.0;
  }
}

LipschitzEstimate kernel_lipschitz(const KernelEvaluator& k, double eps, int trials, std::uint64_t seed) {
  require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");
  require(eps > 0.0, ErrorCode::InvalidArgument, "eps must be positive");
  std::mt19937_64 rng(seed);
  const Matrix& X = k.context().rows();
  std::uniform_int_distribution<Eigen::Index> pick(0, X.rows() - 1);
  LipschitzEstimate est;
  for (int t = 0; t < trials; ++t) {
    Vector x = X.row(pick(rng)).transpose();
    Vector delta = eps * random_direction(X.cols(), rng);
    est.empirical_L = std::max(est.empirical_L, (k.row(x + delta) - k.row(x)).norm() / eps);
  }
  est.analytic_bound = k.lipschitz_bound();
  est.nominal_bound = k.nominal_lipschitz();
  return est;
}

BoundCheck prediction_sensitivity_check(const KRRModel& model, const KernelEvaluator& k, const Vector& x,
                                        double eps, int trials, std::uint64_t seed, std::optional<double> L_K) {
  require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");
  require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be non-negative");
  std::mt19937_64 rng(seed);
  const Eigen::RowVectorXd f0 = k.row(x).transpose() * model.alpha;
  BoundCheck c;
  for (int t = 0; t < trials; ++t) {
    Vector delta = eps * random_direction(x.size(), rng);
    const Eigen::RowVectorXd f1 = k.row(x + delta).transpose() * model.alpha;
    c.measured = std::max(c.measured, (f1 - f0).norm());
  }
  const double L = L_K ? *L_K : k.lipschitz_bound();
  c.bound = eps * L * model.y_norm / model.lambda;
  c.holds = c.measured <= c.bound * (1.0 + 1e-12);
  return c;
}

BoundCheck influence_change_check(const KernelEvaluator& k, const Matrix& Y, double lambda, Eigen::Index index,
                                  double eps, int trials, std::uint64_t seed, std::optional<double> L_K) {
  check_lambda(lambda);
  const Matrix& X = k.context().rows();
  require(index >= 0 && index < X.rows(), ErrorCode::InvalidArgument, "index out of range");
  require(Y.rows() == X.rows(), ErrorCode::ShapeError, "targets do not match context");
  std::mt19937_64 rng(seed);
  const Matrix K = k.train_kernel();
  const Eigen::Index n = K.rows();
  const Matrix I = Matrix::Identity(n, n);
  const Matrix alpha = Eigen::LDLT<Matrix>(K + lambda * I).solve(Y);
  BoundCheck c;
  for (int t = 0; t < trials; ++t) {
    Vector xi = X.row(index).transpose() + eps * random_direction(X.cols(), rng);
    Matrix Kp = K;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == index) continue;
      Kp(index, j) = Kp(j, index) = k.eval(xi, X.row(j).transpose());
    }
    Kp(index, index) = k.eval(xi, xi);
    const Matrix alpha_p = Eigen::LDLT<Matrix>(Kp + lambda * I).solve(Y);
    c.measured = std::max(c.measured, (alpha_p - alpha).cwiseAbs().maxCoeff());
  }
  const double L = L_K ? *L_K : k.lipschitz_bound();
  c.bound = 2.0 * eps * L * Y.norm() / (lambda * lambda);
  c.holds = c.measured <= c.bound * (1.0 + 1e-12);
  return c;
}

double bias_decomposition(const Matrix& K, const Vector& target, double lambda) {
  check_lambda(lambda);
  require(K.rows() == K.cols() && K.rows() == target.size(), ErrorCode::ShapeError, "shape mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (K + K.transpose()));
  const Vector w = es.eigenvectors().transpose() * target;
  double bias = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    const double mu = std::max(es.eigenvalues()(k), 0.0);
    const double f = lambda / (mu + lambda);
    bias += f * f * w(k) * w(k);
  }
  return bias;
}

}  // namespace linattn
