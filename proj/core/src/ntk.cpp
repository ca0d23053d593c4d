#include "linattn/ntk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "linattn/attention.hpp"
#include "linattn/error.hpp"

namespace linattn {

namespace {

Matrix activations(const Matrix& W, const Matrix& F) {
  return (F * W.transpose()).unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

}  // namespace

Matrix network_forward(const NetworkParams& params, const Matrix& F) {
  require(F.cols() == params.dim(), ErrorCode::ShapeError, "feature dimension does not match W");
  return (F * params.W.transpose()).cwiseMax(0.0) * params.A / std::sqrt(double(params.width()));
}

Matrix arch_features(Arch arch, const DataMatrix& context, const Matrix& query) {
  if (arch == Arch::Relu2L) return query;
  return row_normalize(linearized_attention_query(context, query)).rows;
}

KernelMatrix empirical_ntk(const NetworkParams& params, const Matrix& F) {
  return {empirical_ntk_cross(params, F, F), KernelKind::NtkEmpirical};
}

Matrix empirical_ntk_cross(const NetworkParams& params, const Matrix& Fa, const Matrix& Fb) {
  require(params.width() >= 1, ErrorCode::ShapeError, "network width must be >= 1");
  require(Fa.cols() == params.dim() && Fb.cols() == params.dim(), ErrorCode::ShapeError,
          "feature dimension does not match W");
  Matrix Sa = activations(params.W, Fa);
  Matrix Sb = activations(params.W, Fb);
  Matrix overlap = Sa * Sb.transpose() / double(params.width());
  return overlap.cwiseProduct(Fa * Fb.transpose());
}

double relu_ntk_entry(const Vector& a, const Vector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const Vector ua = a / na, ub = b / nb;
  // stable near 0 and pi, unlike acos of the cosine
  const double theta = 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
  return a.dot(b) * (std::numbers::pi - theta) / (2.0 * std::numbers::pi);
}

Matrix infinite_relu_ntk_cross(const Matrix& Fa, const Matrix& Fb) {
  require(Fa.cols() == Fb.cols(), ErrorCode::ShapeError, "feature dimensions differ");
  for (Eigen::Index i = 0; i < Fa.rows(); ++i)
    require(Fa.row(i).norm() > 0.0, ErrorCode::DegenerateRow, "feature row " + std::to_string(i) + " is zero");
  for (Eigen::Index i = 0; i < Fb.rows(); ++i)
    require(Fb.row(i).norm() > 0.0, ErrorCode::DegenerateRow, "feature row " + std::to_string(i) + " is zero");
  Matrix K(Fa.rows(), Fb.rows());
  for (Eigen::Index i = 0; i < Fa.rows(); ++i)
    for (Eigen::Index j = 0; j < Fb.rows(); ++j) K(i, j) = relu_ntk_entry(Fa.row(i), Fb.row(j));
  return K;
}

KernelMatrix infinite_relu_ntk(const Matrix& F) {
  Matrix K = infinite_relu_ntk_cross(F, F);
  K = 0.5 * (K + K.transpose());
  return {K, KernelKind::NtkInfinite};
}

McKernel mc_ntk(const Matrix& F, std::int64_t samples, std::uint64_t seed) {
  require(samples >= 1, ErrorCode::InvalidArgument, "samples must be >= 1");
  const Eigen::Index n = F.rows(), d = F.cols();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix ip = F * F.transpose();
  Matrix sum = Matrix::Zero(n, n);
  const std::int64_t chunk = 4096;
  Matrix W;
  for (std::int64_t done = 0; done < samples; done += chunk) {
    const Eigen::Index m = Eigen::Index(std::min(chunk, samples - done));
    W.resize(m, d);
    for (Eigen::Index r = 0; r < m; ++r)
      for (Eigen::Index c = 0; c < d; ++c) W(r, c) = nd(rng);
    Matrix S = activations(W, F);
    sum += S * S.transpose();
  }
  const double N = double(samples);
  Matrix p = sum / N;
  McKernel out;
  out.kernel = {p.cwiseProduct(ip), KernelKind::NtkEmpirical};
  // per-sample values are Bernoulli(p) times the inner product
  Matrix var = (p - p.cwiseProduct(p)).cwiseMax(0.0);
  out.std_error = (var / N).cwiseSqrt().cwiseProduct(ip.cwiseAbs());
  return out;
}

KernelMatrix sequential_ntk(const DataMatrix& X, bool normalize) {
  Features F = linearized_attention(X);
  if (normalize) F = row_normalize(F);
  return infinite_relu_ntk(F.rows);
}

double ntk_distance(const Matrix& pred_finite, const Matrix& pred_kernel) {
  require(pred_finite.rows() == pred_kernel.rows() && pred_finite.cols() == pred_kernel.cols(),
          ErrorCode::ShapeError, "prediction shapes differ");
  return (pred_finite - pred_kernel).norm();
}

}  // namespace linattn
