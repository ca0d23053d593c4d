#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>

namespace linattn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// n x d sample matrix. Rows are expected to be unit norm but this is only
// checked on request: prescribed-spectrum data and attacked points are
// legitimately off the sphere.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix rows);

  const Matrix& rows() const { return rows_; }
  Eigen::Index n() const { return rows_.rows(); }
  Eigen::Index d() const { return rows_.cols(); }
  Vector row(Eigen::Index i) const { return rows_.row(i).transpose(); }

  bool has_unit_rows(double tol = 1e-10) const;

 private:
  Matrix rows_;
};

enum class KernelKind { Gram, Attention, Polynomial, Qkv, NtkEmpirical, NtkInfinite };

std::string_view to_string(KernelKind kind);

struct KernelMatrix {
  Matrix K;
  KernelKind kind = KernelKind::Gram;
};

struct Features {
  Matrix rows;
  bool normalized = false;
};

enum class Arch { Relu2L, MlpAttn };

std::string_view to_string(Arch arch);
Arch parse_arch(std::string_view name);

// Deterministic child seed for sweep cells and trials.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Max |K - K^T| entry.
double symmetry_defect(const Matrix& M);

}  // namespace linattn
