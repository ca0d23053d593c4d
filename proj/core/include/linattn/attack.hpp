#pragma once

#include <functional>
#include <string>

#include "linattn/ntk.hpp"
#include "linattn/types.hpp"

namespace linattn {

enum class AttackKind { Fgsm, Pgd, Mim };

AttackKind parse_attack_kind(const std::string& name);
std::string_view to_string(AttackKind kind);

struct AttackConfig {
  AttackKind kind = AttackKind::Pgd;
  double eps = 0.3;
  double alpha = 0.01;
  int iters = 40;
  double decay = 0.9;
};

void validate(const AttackConfig& cfg);

struct LossGrad {
  double loss = 0.0;
  Vector grad;
};

// (point, target) -> loss and gradient with respect to the point.
using GradientProvider = std::function<LossGrad(const Vector&, const Vector&)>;

Vector fgsm(const GradientProvider& g, const Vector& x, const Vector& y, double eps);
Vector pgd(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg);
Vector mim(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg);
Vector run_attack(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg);

enum class LossKind { Squared, CrossEntropy };

// Loss of training row `index` when its input is replaced by x. For mlp_attn
// every other context row is held fixed, so the feature is
// normalize((sum_{k != index} x_k x_k^T) x + ||x||^2 x).
LossGrad network_loss_grad(const NetworkParams& params, Arch arch, const DataMatrix& context,
                           Eigen::Index index, const Vector& x, const Vector& y,
                           LossKind loss = LossKind::Squared);

Vector network_input_gradient(const NetworkParams& params, Arch arch, const DataMatrix& context,
                              Eigen::Index index, const Vector& y, LossKind loss = LossKind::Squared);

// The provider keeps a reference to params, which must outlive it.
GradientProvider network_gradient_provider(const NetworkParams& params, Arch arch, const DataMatrix& context,
                                           Eigen::Index index, LossKind loss = LossKind::Squared);

// Context second moment with row `index` removed: sum_{k != index} x_k x_k^T.
Matrix leave_one_out_moment(const DataMatrix& context, Eigen::Index index);

GradientProvider network_gradient_provider(const NetworkParams& params, Arch arch, Matrix moment,
                                           LossKind loss = LossKind::Squared);

// Network input feature of a replaced row given its leave-one-out moment.
Vector point_feature(Arch arch, const Matrix& moment, const Vector& x);

}  // namespace linattn
