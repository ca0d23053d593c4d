#include "linattn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "linattn/error.hpp"

namespace linattn {

Spectrum spectrum(const Matrix& M, double tol) {
  require(M.rows() == M.cols() && M.rows() > 0, ErrorCode::ShapeError, "spectrum needs a square matrix");
  require(symmetry_defect(M) <= 1e-8 * std::max(1.0, M.cwiseAbs().maxCoeff()), ErrorCode::NotSymmetric,
          "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  Spectrum s;
  const Vector& ev = es.eigenvalues();
  s.values.reserve(std::size_t(ev.size()));
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) s.values.push_back(std::max(ev(i), 0.0));
  const double top = s.values.front();
  s.effective_rank = 0;
  for (double v : s.values)
    if (top > 0.0 && v > tol * top) ++s.effective_rank;
  return s;
}

double condition_number(const Spectrum& s, std::optional<Eigen::Index> restrict_to_rank) {
  require(!s.values.empty() && s.values.front() > 0.0, ErrorCode::ZeroMatrix, "spectrum has no positive value");
  if (restrict_to_rank) {
    Eigen::Index r = *restrict_to_rank;
    require(r >= 1 && r <= Eigen::Index(s.values.size()), ErrorCode::InvalidArgument, "rank restriction out of range");
    return s.values.front() / s.values[std::size_t(r - 1)];
  }
  if (s.values.back() <= 0.0) return std::numeric_limits<double>::infinity();
  return s.values.front() / s.values.back();
}

double verify_spectral_transfer(const DataMatrix& X, int k) {
  require(k >= 0 && k <= 4, ErrorCode::InvalidArgument, "spectral transfer check limited to 0 <= k <= 4");
  const Matrix& R = X.rows();
  Matrix C = R.transpose() * R;
  Matrix Ck = Matrix::Identity(C.rows(), C.cols());
  for (int i = 0; i < k; ++i) Ck = Ck * C;
  Matrix lhs = R * Ck * R.transpose();
  Matrix G = R * R.transpose();
  Matrix rhs = G;
  for (int i = 0; i < k; ++i) rhs = rhs * G;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

ConditioningReport verify_cubic_conditioning(const DataMatrix& X, int layers) {
  require(layers >= 1, ErrorCode::InvalidArgument, "layers must be >= 1");
  const Matrix& R = X.rows();
  Matrix G = R * R.transpose();
  Spectrum sg = spectrum(G);
  ConditioningReport rep;
  rep.layers = layers;
  const Eigen::Index n = X.n();
  const bool full = X.n() <= X.d() && sg.values.back() > 1e-10 * sg.values.front();
  rep.rank_restricted = !full;
  rep.rank = full ? n : sg.effective_rank;
  rep.kappa_G = condition_number(sg, rep.rank);

  Matrix Xk = R;
  for (int i = 0; i < layers; ++i) Xk = G * Xk;
  Matrix Gt = Xk * Xk.transpose();
  Gt = 0.5 * (Gt + Gt.transpose());
  Spectrum st = spectrum(Gt, 0.0);
  rep.kappa_Gtilde = condition_number(st, rep.rank);
  rep.predicted = std::pow(rep.kappa_G, 2 * layers + 1);
  rep.relative_error = std::abs(rep.kappa_Gtilde - rep.predicted) / rep.predicted;
  return rep;
}

double width_requirement(double kappa_G, Eigen::Index n, double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorCode::BadTolerance, "eps must lie in (0, 1)");
  require(n >= 2, ErrorCode::InvalidArgument, "n must be >= 2");
  require(kappa_G >= 1.0, ErrorCode::InvalidArgument, "condition number must be >= 1");
  return std::pow(kappa_G, 6) * double(n) * std::log(double(n)) / (eps * eps);
}

double bernstein_deviation(double lambda1, Eigen::Index n, double m) {
  require(m >= 1.0 && n >= 2, ErrorCode::InvalidArgument, "need m >= 1 and n >= 2");
  const double l3 = lambda1 * lambda1 * lambda1;
  const double ln = std::log(double(n));
  return l3 * std::sqrt(double(n) * ln / m) + l3 * ln / m;
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

}  // namespace linattn
