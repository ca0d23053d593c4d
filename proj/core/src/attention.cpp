#include "linattn/attention.hpp"

#include <cmath>

#include "linattn/error.hpp"

namespace linattn {

namespace {

double attention_scale(Eigen::Index n, Eigen::Index d) {
  return 1.0 / (double(n) * std::sqrt(double(d)));
}

bool full_rank(const Matrix& W) {
  Eigen::ColPivHouseholderQR<Matrix> qr(W);
  return qr.rank() == std::min(W.rows(), W.cols());
}

}  // namespace

Features linearized_attention(const DataMatrix& X, bool scaled) {
  return linearized_attention_query(X, X.rows(), scaled);
}

Features linearized_attention_query(const DataMatrix& X_train, const Matrix& Q, bool scaled) {
  require(Q.cols() == X_train.d(), ErrorCode::ShapeError, "query dimension does not match training data");
  const Matrix& X = X_train.rows();
  Matrix C = X.transpose() * X;
  Features out{Q * C, false};
  if (scaled) out.rows *= attention_scale(X.rows(), X.cols());
  return out;
}

Features row_normalize(const Features& F) {
  Features out{F.rows, true};
  for (Eigen::Index i = 0; i < out.rows.rows(); ++i) {
    double nrm = out.rows.row(i).norm();
    require(nrm > 0.0, ErrorCode::DegenerateRow, "feature row " + std::to_string(i) + " is zero");
    out.rows.row(i) /= nrm;
  }
  return out;
}

KernelMatrix gram(const DataMatrix& X) {
  return {X.rows() * X.rows().transpose(), KernelKind::Gram};
}

KernelMatrix attention_kernel(const DataMatrix& X) {
  Matrix G = X.rows() * X.rows().transpose();
  Matrix G2 = G * G;
  return {G2 * G, KernelKind::Attention};
}

KernelMatrix attention_kernel_bruteforce(const DataMatrix& X) {
  const Eigen::Index n = X.n();
  require(n <= 256, ErrorCode::OracleSizeExceeded, "brute-force kernel limited to n <= 256");
  const Matrix& R = X.rows();
  auto dot = [&](Eigen::Index a, Eigen::Index b) { return R.row(a).dot(R.row(b)); };
  Matrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) s += dot(i, k) * dot(k, l) * dot(l, j);
      K(i, j) = s;
    }
  return {K, KernelKind::Attention};
}

KernelMatrix polynomial_kernel(const DataMatrix& X, int p) {
  require(p >= 1, ErrorCode::BadDegree, "polynomial degree must be >= 1");
  Matrix G = X.rows() * X.rows().transpose();
  Matrix K = G;
  for (int k = 1; k < p; ++k) K = K.cwiseProduct(G);
  return {K, KernelKind::Polynomial};
}

QkvKernel qkv_attention_kernel(const DataMatrix& X, const Matrix& Wq, const Matrix& Wk, const Matrix& Wv) {
  const Eigen::Index d = X.d();
  for (const Matrix* W : {&Wq, &Wk, &Wv})
    require(W->rows() == d && W->cols() == d, ErrorCode::ShapeError, "projection matrices must be d x d");
  const Matrix& R = X.rows();
  Matrix A = (R * Wq) * (R * Wk).transpose();  // A_ik = x_i^T M_QK x_k
  Matrix F = A * (R * Wv);
  QkvKernel out;
  out.kernel = {F * F.transpose(), KernelKind::Qkv};
  out.rank_warning = !(full_rank(Wq) && full_rank(Wk) && full_rank(Wv));
  return out;
}

Matrix softmax_weights(const DataMatrix& X, double scale) {
  require(scale > 0.0, ErrorCode::InvalidArgument, "softmax scale must be positive");
  Matrix S = scale * (X.rows() * X.rows().transpose());
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    double mx = S.row(i).maxCoeff();
    S.row(i) = (S.row(i).array() - mx).exp();
    S.row(i) /= S.row(i).sum();
  }
  return S;
}

Features softmax_attention(const DataMatrix& X, double scale) {
  return {softmax_weights(X, scale) * X.rows(), false};
}

double default_softmax_scale(const DataMatrix& X) { return 1.0 / std::sqrt(double(X.d())); }

double taylor_error(const DataMatrix& X, double scale) {
  const Eigen::Index n = X.n();
  Matrix A = scale * (X.rows() * X.rows().transpose());
  Vector mean = A.rowwise().mean();
  Matrix W = (A.colwise() - mean).array() + 1.0;
  W /= double(n);
  return (softmax_attention(X, scale).rows - W * X.rows()).norm();
}

}  // namespace linattn
