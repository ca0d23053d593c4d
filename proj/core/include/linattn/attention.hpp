#pragma once

#include "linattn/types.hpp"

namespace linattn {

// f(X) = X X^T X. With scaled = true the 1/(n sqrt(d)) factor is kept.
Features linearized_attention(const DataMatrix& X, bool scaled = false);

// Transductive features of query rows against the training matrix: Q X^T X.
Features linearized_attention_query(const DataMatrix& X_train, const Matrix& Q, bool scaled = false);

Features row_normalize(const Features& F);

KernelMatrix gram(const DataMatrix& X);
KernelMatrix attention_kernel(const DataMatrix& X);
KernelMatrix attention_kernel_bruteforce(const DataMatrix& X);
KernelMatrix polynomial_kernel(const DataMatrix& X, int p);

struct QkvKernel {
  KernelMatrix kernel;
  bool rank_warning = false;
};

QkvKernel qkv_attention_kernel(const DataMatrix& X, const Matrix& Wq, const Matrix& Wk, const Matrix& Wv);

// Row-stochastic softmax(scale * X X^T).
Matrix softmax_weights(const DataMatrix& X, double scale);
Features softmax_attention(const DataMatrix& X, double scale);
double default_softmax_scale(const DataMatrix& X);

double taylor_error(const DataMatrix& X, double scale);

}  // namespace linattn
