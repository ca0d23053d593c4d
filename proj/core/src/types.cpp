#include "linattn/types.hpp"

#include <cmath>
#include <random>

#include "linattn/error.hpp"

namespace linattn {

DataMatrix::DataMatrix(Matrix rows) : rows_(std::move(rows)) {
  require(rows_.rows() >= 1 && rows_.cols() >= 1, ErrorCode::EmptyDataset,
          "data matrix needs n >= 1 and d >= 1");
  require(rows_.allFinite(), ErrorCode::InvalidArgument, "data matrix has non-finite entries");
}

bool DataMatrix::has_unit_rows(double tol) const {
  for (Eigen::Index i = 0; i < rows_.rows(); ++i)
    if (std::abs(rows_.row(i).norm() - 1.0) > tol) return false;
  return true;
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::Gram: return "gram";
    case KernelKind::Attention: return "attention";
    case KernelKind::Polynomial: return "polynomial";
    case KernelKind::Qkv: return "qkv";
    case KernelKind::NtkEmpirical: return "ntk_empirical";
    case KernelKind::NtkInfinite: return "ntk_infinite";
  }
  return "unknown";
}

std::string_view to_string(Arch arch) {
  return arch == Arch::Relu2L ? "relu2l" : "mlp_attn";
}

Arch parse_arch(std::string_view name) {
  if (name == "relu2l") return Arch::Relu2L;
  if (name == "mlp_attn") return Arch::MlpAttn;
  fail(ErrorCode::InvalidArgument, "unknown architecture '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::seed_seq ss{std::uint32_t(base), std::uint32_t(base >> 32), std::uint32_t(a), std::uint32_t(a >> 32),
                   std::uint32_t(b), std::uint32_t(b >> 32)};
  std::uint32_t out[2];
  ss.generate(out, out + 2);
  return (std::uint64_t(out[0]) << 32) | out[1];
}

double symmetry_defect(const Matrix& M) {
  if (M.rows() != M.cols()) return INFINITY;
  return (M - M.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace linattn
