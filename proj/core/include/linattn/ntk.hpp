#pragma once

#include <cstdint>

#include "linattn/types.hpp"

namespace linattn {

// First-layer weights W (m x d) and fixed +-1 output signs A (m x C).
struct NetworkParams {
  Matrix W;
  Matrix A;
  double init_scale = 0.01;

  Eigen::Index width() const { return W.rows(); }
  Eigen::Index dim() const { return W.cols(); }
  Eigen::Index outputs() const { return A.cols(); }
  Vector a() const { return A.col(0); }
};

// (1/sqrt(m)) relu(F W^T) A
Matrix network_forward(const NetworkParams& params, const Matrix& F);

// Network input features: raw rows for relu2l, row-normalized transductive
// attention against the context for mlp_attn.
Matrix arch_features(Arch arch, const DataMatrix& context, const Matrix& query);

KernelMatrix empirical_ntk(const NetworkParams& params, const Matrix& F);
Matrix empirical_ntk_cross(const NetworkParams& params, const Matrix& Fa, const Matrix& Fb);

// ip (pi - theta) / (2 pi); zero when either argument is zero.
double relu_ntk_entry(const Vector& a, const Vector& b);
KernelMatrix infinite_relu_ntk(const Matrix& F);
Matrix infinite_relu_ntk_cross(const Matrix& Fa, const Matrix& Fb);

struct McKernel {
  KernelMatrix kernel;
  Matrix std_error;
};

McKernel mc_ntk(const Matrix& F, std::int64_t samples, std::uint64_t seed);

KernelMatrix sequential_ntk(const DataMatrix& X, bool normalize);

double ntk_distance(const Matrix& pred_finite, const Matrix& pred_kernel);

}  // namespace linattn
