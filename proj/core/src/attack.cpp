#include "linattn/attack.hpp"

#include <cmath>

#include "linattn/error.hpp"

namespace linattn {

namespace {

Vector sign(const Vector& v) {
  return v.unaryExpr([](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); });
}

Vector project(const Vector& x, const Vector& x0, double eps) {
  return x.array().max(x0.array() - eps).min(x0.array() + eps).matrix();
}

}  // namespace

AttackKind parse_attack_kind(const std::string& name) {
  if (name == "fgsm") return AttackKind::Fgsm;
  if (name == "pgd") return AttackKind::Pgd;
  if (name == "mim") return AttackKind::Mim;
  fail(ErrorCode::InvalidArgument, "unknown attack '" + name + "'");
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::Fgsm: return "fgsm";
    case AttackKind::Pgd: return "pgd";
    case AttackKind::Mim: return "mim";
  }
  return "unknown";
}

void validate(const AttackConfig& cfg) {
  require(cfg.eps >= 0.0, ErrorCode::InvalidArgument, "attack eps must be >= 0");
  require(cfg.iters >= 1, ErrorCode::InvalidArgument, "attack iters must be >= 1");
  require(cfg.decay >= 0.0 && cfg.decay <= 1.0, ErrorCode::InvalidArgument, "attack decay must lie in [0, 1]");
  if (cfg.kind != AttackKind::Fgsm)
    require(cfg.alpha > 0.0, ErrorCode::InvalidArgument, "attack alpha must be > 0");
}

Vector fgsm(const GradientProvider& g, const Vector& x, const Vector& y, double eps) {
  require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be >= 0");
  if (eps == 0.0) return x;
  return x + eps * sign(g(x, y).grad);
}

Vector pgd(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg) {
  validate(cfg);
  if (cfg.eps == 0.0) return x;
  Vector xa = x;
  for (int t = 0; t < cfg.iters; ++t) xa = project(xa + cfg.alpha * sign(g(xa, y).grad), x, cfg.eps);
  return xa;
}

Vector mim(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg) {
  validate(cfg);
  if (cfg.eps == 0.0) return x;
  Vector xa = x;
  Vector mom = Vector::Zero(x.size());
  for (int t = 0; t < cfg.iters; ++t) {
    Vector grad = g(xa, y).grad;
    const double l1 = grad.lpNorm<1>();
    mom = cfg.decay * mom + (l1 > 0.0 ? Vector(grad / l1) : Vector(Vector::Zero(x.size())));
    xa = project(xa + cfg.alpha * sign(mom), x, cfg.eps);
  }
  return xa;
}

Vector run_attack(const GradientProvider& g, const Vector& x, const Vector& y, const AttackConfig& cfg) {
  switch (cfg.kind) {
    case AttackKind::Fgsm: return fgsm(g, x, y, cfg.eps);
    case AttackKind::Pgd: return pgd(g, x, y, cfg);
    case AttackKind::Mim: return mim(g, x, y, cfg);
  }
  return x;
}

namespace {

// M is the context second-moment matrix with the attacked row removed.
LossGrad loss_grad_impl(const NetworkParams& params, Arch arch, const Matrix& M, const Vector& x,
                        const Vector& y, LossKind loss) {
  require(x.size() == params.dim(), ErrorCode::ShapeError, "input dimension does not match W");
  require(y.size() == params.outputs(), ErrorCode::ShapeError, "target size does not match outputs");
  Vector f, t;
  if (arch == Arch::Relu2L) {
    f = x;
  } else {
    require(M.rows() == x.size(), ErrorCode::ShapeError, "context dimension does not match input");
    t = M * x + x.squaredNorm() * x;
    const double tn = t.norm();
    require(tn > 0.0, ErrorCode::DegenerateRow, "attention feature vanished");
    f = t / tn;
  }
  const double sm = std::sqrt(double(params.width()));
  const Vector pre = params.W * f;
  const Vector act = pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  const Vector out = params.A.transpose() * pre.cwiseMax(0.0) / sm;

  LossGrad lg;
  Vector r;
  if (loss == LossKind::CrossEntropy && out.size() > 1) {
    const double mx = out.maxCoeff();
    Vector p = (out.array() - mx).exp();
    const double z = p.sum();
    p /= z;
    Eigen::Index label = 0;
    y.maxCoeff(&label);
    lg.loss = -(out(label) - mx - std::log(z));
    r = p - y;
  } else {
    r = out - y;
    lg.loss = 0.5 * r.squaredNorm();
  }
  Vector gf = params.W.transpose() * act.cwiseProduct(params.A * r) / sm;
  if (arch == Arch::Relu2L) {
    lg.grad = std::move(gf);
    return lg;
  }
  const double tn = t.norm();
  const Vector gt = (gf - f * f.dot(gf)) / tn;
  // J = M + ||x||^2 I + 2 x x^T is symmetric
  lg.grad = M * gt + x.squaredNorm() * gt + 2.0 * x * x.dot(gt);
  return lg;
}


}  // namespace

Matrix leave_one_out_moment(const DataMatrix& context, Eigen::Index index) {
  require(index >= 0 && index < context.n(), ErrorCode::ShapeError, "index outside context");
  const Matrix& X = context.rows();
  const Vector xi = X.row(index).transpose();
  return X.transpose() * X - xi * xi.transpose();
}

Vector point_feature(Arch arch, const Matrix& moment, const Vector& x) {
  if (arch == Arch::Relu2L) return x;
  Vector t = moment * x + x.squaredNorm() * x;
  const double tn = t.norm();
  require(tn > 0.0, ErrorCode::DegenerateRow, "attention feature vanished");
  return t / tn;
}

LossGrad network_loss_grad(const NetworkParams& params, Arch arch, const DataMatrix& context,
                           Eigen::Index index, const Vector& x, const Vector& y, LossKind loss) {
  if (arch == Arch::Relu2L) return loss_grad_impl(params, arch, Matrix(), x, y, loss);
  require(context.d() == x.size(), ErrorCode::ShapeError, "context dimension does not match input");
  return loss_grad_impl(params, arch, leave_one_out_moment(context, index), x, y, loss);
}

Vector network_input_gradient(const NetworkParams& params, Arch arch, const DataMatrix& context,
                              Eigen::Index index, const Vector& y, LossKind loss) {
  require(index >= 0 && index < context.n(), ErrorCode::ShapeError, "index outside context");
  return network_loss_grad(params, arch, context, index, context.row(index), y, loss).grad;
}

GradientProvider network_gradient_provider(const NetworkParams& params, Arch arch, const DataMatrix& context,
                                           Eigen::Index index, LossKind loss) {
  Matrix M;
  if (arch == Arch::MlpAttn) M = leave_one_out_moment(context, index);
  return network_gradient_provider(params, arch, std::move(M), loss);
}

GradientProvider network_gradient_provider(const NetworkParams& params, Arch arch, Matrix moment, LossKind loss) {
  return [&params, arch, M = std::move(moment), loss](const Vector& x, const Vector& y) {
    return loss_grad_impl(params, arch, M, x, y, loss);
  };
}

}  // namespace linattn
