#pragma once

#include <cstdint>
#include <optional>

#include "linattn/types.hpp"

namespace linattn {

struct KRRModel {
  Matrix alpha;        // n x C
  double lambda = 1e-3;
  KernelKind kernel_kind = KernelKind::Gram;
  Matrix reg_inverse;  // (K + lambda I)^-1
  double y_norm = 0.0;
};

struct InfluenceVector {
  Vector scores;  // positive = removing the point raises test loss (helpful)
  Eigen::Index test_index = -1;
};

struct StabilityReport {
  double min_eig = 0.0;
  double cond_number = 1.0;
  double inversion_residual = 0.0;
  double symmetry_residual = 0.0;
  double scale = 0.0;  // ||K||_F, the reference for the relative thresholds
  bool min_eig_ok = false;
  bool cond_ok = false;
  bool inversion_ok = false;
  bool symmetry_ok = false;
  bool passed = false;
};

struct BoundCheck {
  double measured = 0.0;
  double bound = 0.0;
  bool holds = true;
};

StabilityReport stability_check(const Matrix& K, double lambda);

KRRModel krr_fit(const KernelMatrix& K, const Matrix& Y, double lambda);
Matrix krr_predict(const Matrix& k_test, const KRRModel& model);

// Exact leave-one-out influence through the Schur complement of (K + lambda I).
InfluenceVector loo_influence(const Matrix& K, const Matrix& Y, double lambda, const Vector& k_test,
                              const Vector& y_test);

// Column t holds the influence vector for test row t.
Matrix loo_influence_batch(const Matrix& K, const Matrix& Y, double lambda, const Matrix& K_test,
                           const Matrix& Y_test);

BoundCheck resolvent_bound_check(const Matrix& K, const Matrix& dK, double lambda);

double intrinsic_sensitivity(double L_K, double y_norm, double lambda);

// Kernels that can be evaluated at arbitrary points against a fixed context.
// Attention: k(x, y) = x^T (X^T X)^2 y, which reproduces G^3 on the training rows.
class KernelEvaluator {
 public:
  enum class Kind { Constant, Gram, Attention, ArcCos };

  KernelEvaluator(Kind kind, DataMatrix context);

  Kind kind() const { return kind_; }
  const DataMatrix& context() const { return context_; }

  double eval(const Vector& x, const Vector& y) const;
  Vector row(const Vector& x) const;
  Matrix train_kernel() const;

  // Upper bound on |k_j(x + delta) - k_j(x)| / ||delta||_2 for each context row j.
  Vector entry_bounds() const;
  // sqrt of the summed squared entry bounds: a valid Lipschitz constant of x -> k(x).
  double lipschitz_bound() const;
  // The headline constant quoted for each kernel family: n ||G||_2 for attention, 1 otherwise.
  double nominal_lipschitz() const;

 private:
  Kind kind_;
  DataMatrix context_;
  Matrix M_;  // attention only
};

struct LipschitzEstimate {
  double empirical_L = 0.0;
  double analytic_bound = 0.0;
  double nominal_bound = 0.0;
};

LipschitzEstimate kernel_lipschitz(const KernelEvaluator& k, double eps, int trials, std::uint64_t seed);

// Max |f(x + delta) - f(x)| over sampled ||delta||_2 = eps versus eps L ||y|| / lambda.
BoundCheck prediction_sensitivity_check(const KRRModel& model, const KernelEvaluator& k, const Vector& x,
                                        double eps, int trials, std::uint64_t seed,
                                        std::optional<double> L_K = {});

// Perturbs training row `index` and compares ||Delta alpha||_inf with 2 eps L ||y|| / lambda^2.
BoundCheck influence_change_check(const KernelEvaluator& k, const Matrix& Y, double lambda,
                                  Eigen::Index index, double eps, int trials, std::uint64_t seed,
                                  std::optional<double> L_K = {});

double bias_decomposition(const Matrix& K, const Vector& target, double lambda);

}  // namespace linattn
