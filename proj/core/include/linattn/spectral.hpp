#pragma once

#include <optional>
#include <vector>

#include "linattn/types.hpp"

namespace linattn {

struct Spectrum {
  std::vector<double> values;  // descending, clamped at 0
  Eigen::Index effective_rank = 0;
};

struct ConditioningReport {
  double kappa_G = 1.0;
  double kappa_Gtilde = 1.0;
  double predicted = 1.0;
  int layers = 1;
  double relative_error = 0.0;
  bool rank_restricted = false;
  Eigen::Index rank = 0;
};

Spectrum spectrum(const Matrix& M, double tol = 1e-10);

// lambda_1 / lambda_r. Without a restriction a zero smallest value gives +inf.
double condition_number(const Spectrum& s, std::optional<Eigen::Index> restrict_to_rank = {});

double verify_spectral_transfer(const DataMatrix& X, int k);

// k stacked layers act as X -> G^k X, so the effective Gram is G^(2k+1).
ConditioningReport verify_cubic_conditioning(const DataMatrix& X, int layers = 1);

double width_requirement(double kappa_G, Eigen::Index n, double eps);

double bernstein_deviation(double lambda1, Eigen::Index n, double m);

double spectral_norm(const Matrix& M);

}  // namespace linattn
