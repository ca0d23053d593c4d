#include "linattn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "linattn/attention.hpp"
#include "linattn/error.hpp"
#include "linattn/influence.hpp"
#include "linattn/parallel.hpp"

namespace linattn {

namespace {

// dObjective/dOutput for a batch, already carrying the 1/(2B) factor.
Matrix output_residual(const Matrix& out, const Matrix& targets, LossKind loss) {
  const double B = double(out.rows());
  if (loss == LossKind::CrossEntropy && out.cols() > 1) {
    Matrix P = out;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      const double mx = P.row(i).maxCoeff();
      P.row(i) = (P.row(i).array() - mx).exp();
      P.row(i) /= P.row(i).sum();
    }
    return (P - targets) / (2.0 * B);
  }
  return (out - targets) / B;
}

double data_loss(const Matrix& out, const Matrix& targets, LossKind loss) {
  double total = 0.0;
  if (loss == LossKind::CrossEntropy && out.cols() > 1) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const double mx = out.row(i).maxCoeff();
      const double lse = mx + std::log((out.row(i).array() - mx).exp().sum());
      Eigen::Index label = 0;
      targets.row(i).maxCoeff(&label);
      total += lse - out(i, label);
    }
  } else {
    total = (out - targets).squaredNorm();
  }
  return total / (2.0 * double(out.rows()));
}

Matrix weight_gradient(const NetworkParams& p, const NetworkParams& init, const Matrix& Fb, const Matrix& Tb,
                       LossKind loss, double l2) {
  const double sm = std::sqrt(double(p.width()));
  const Matrix pre = Fb * p.W.transpose();
  const Matrix out = pre.cwiseMax(0.0) * p.A / sm;
  const Matrix R = output_residual(out, Tb, loss);
  const Matrix act = pre.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  return act.cwiseProduct(R * p.A.transpose()).transpose() * Fb / sm + l2 * (p.W - init.W);
}

struct AdamState {
  Matrix m, v;
  long t = 0;
};

void step(NetworkParams& p, const Matrix& grad, const TrainConfig& cfg, AdamState& st) {
  if (cfg.optimizer == Optimizer::Gd) {
    p.W -= cfg.learning_rate * grad;
    return;
  }
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  if (st.m.size() == 0) {
    st.m = Matrix::Zero(grad.rows(), grad.cols());
    st.v = Matrix::Zero(grad.rows(), grad.cols());
  }
  ++st.t;
  st.m = b1 * st.m + (1.0 - b1) * grad;
  st.v = b2 * st.v + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, double(st.t));
  const double c2 = 1.0 - std::pow(b2, double(st.t));
  p.W -= (cfg.learning_rate * (st.m / c1).array() / ((st.v / c2).array().sqrt() + eps)).matrix();
}

TrainedModel run_training(const NetworkParams& net, const LabeledDataset& data, Arch arch, const TrainConfig& cfg,
                          bool adversarial) {
  validate(cfg);
  const Eigen::Index n = data.data.n();
  require(Eigen::Index(data.labels.size()) == n, ErrorCode::ShapeError, "labels do not match data");
  require(net.dim() == data.data.d(), ErrorCode::ShapeError, "network input dimension does not match data");
  require(net.outputs() == output_count(data.num_classes), ErrorCode::ShapeError,
          "network outputs do not match the class count");
  const Matrix targets = training_targets(data);
  const LossKind loss = training_loss(data.num_classes);
  const Matrix F = arch_features(arch, data.data, data.data.rows());

  std::vector<Matrix> moments;
  if (adversarial && arch == Arch::MlpAttn) {
    moments.reserve(std::size_t(n));
    for (Eigen::Index i = 0; i < n; ++i) moments.push_back(leave_one_out_moment(data.data, i));
  }

  TrainedModel model;
  model.arch = arch;
  model.params = net;
  model.init_params = net;
  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  AdamState adam;
  double prev = NAN;
  const Eigen::Index bs = std::min<Eigen::Index>(cfg.batch_size, n);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += bs) {
      const Eigen::Index b = std::min(bs, n - start);
      Matrix Fb(b, F.cols()), Tb(b, targets.cols());
      for (Eigen::Index k = 0; k < b; ++k) {
        const Eigen::Index i = order[std::size_t(start + k)];
        Tb.row(k) = targets.row(i);
        Fb.row(k) = F.row(i);
        if (!adversarial) continue;
        const Vector x = data.data.row(i);
        const Matrix& M = arch == Arch::MlpAttn ? moments[std::size_t(i)] : Matrix();
        GradientProvider g = network_gradient_provider(model.params, arch, M, loss);
        const Vector xa = run_attack(g, x, targets.row(i).transpose(), *cfg.adversarial);
        if (xa != x) Fb.row(k) = point_feature(arch, M, xa).transpose();
      }
      step(model.params, weight_gradient(model.params, model.init_params, Fb, Tb, loss, cfg.l2_lambda), cfg, adam);
    }
    const double obj = training_objective(model.params, model.init_params, F, targets, loss, cfg.l2_lambda);
    if (!std::isfinite(obj) || !model.params.W.allFinite())
      fail(ErrorCode::TrainingDiverged, "objective became non-finite at epoch " + std::to_string(epoch));
    model.loss_history.push_back(obj);
    if (cfg.plateau_tol > 0.0 && std::isfinite(prev) &&
        std::abs(prev - obj) <= cfg.plateau_tol * std::max(std::abs(prev), 1e-300))
      break;
    prev = obj;
  }
  return model;
}

}  // namespace

Optimizer parse_optimizer(const std::string& name) {
  if (name == "adam") return Optimizer::Adam;
  if (name == "gd") return Optimizer::Gd;
  fail(ErrorCode::InvalidArgument, "unknown optimizer '" + name + "'");
}

std::string_view to_string(Optimizer opt) { return opt == Optimizer::Adam ? "adam" : "gd"; }

void validate(const TrainConfig& cfg) {
  require(cfg.learning_rate > 0.0, ErrorCode::InvalidArgument, "learning_rate must be positive");
  require(cfg.epochs >= 0, ErrorCode::InvalidArgument, "epochs must be non-negative");
  require(cfg.batch_size >= 1, ErrorCode::InvalidArgument, "batch_size must be positive");
  require(cfg.l2_lambda >= 0.0, ErrorCode::InvalidArgument, "l2_lambda must be non-negative");
  require(cfg.plateau_tol >= 0.0, ErrorCode::InvalidArgument, "plateau_tol must be non-negative");
  if (cfg.adversarial) validate(*cfg.adversarial);
}

NetworkParams init_network(Eigen::Index m, Eigen::Index d, double init_scale, std::uint64_t seed,
                           Eigen::Index outputs) {
  require(m >= 1 && d >= 1 && outputs >= 1, ErrorCode::InvalidArgument, "width, dimension and outputs must be >= 1");
  require(init_scale > 0.0, ErrorCode::InvalidArgument, "init_scale must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, init_scale);
  NetworkParams p;
  p.init_scale = init_scale;
  p.W.resize(m, d);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < d; ++c) p.W(r, c) = nd(rng);
  p.A.resize(m, outputs);
  std::vector<double> signs(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) signs[std::size_t(r)] = r % 2 == 0 ? 1.0 : -1.0;
  for (Eigen::Index c = 0; c < outputs; ++c) {
    if (c > 0) std::shuffle(signs.begin(), signs.end(), rng);
    for (Eigen::Index r = 0; r < m; ++r) p.A(r, c) = signs[std::size_t(r)];
  }
  return p;
}

Eigen::Index output_count(int num_classes) {
  require(num_classes >= 2, ErrorCode::InvalidArgument, "need at least two classes");
  return num_classes == 2 ? 1 : num_classes;
}

Matrix training_targets(const LabeledDataset& data) {
  if (data.num_classes == 2) {
    Matrix T(Eigen::Index(data.labels.size()), 1);
    for (std::size_t i = 0; i < data.labels.size(); ++i) {
      require(data.labels[i] == 0 || data.labels[i] == 1, ErrorCode::LabelOutOfRange, "binary label outside {0,1}");
      T(Eigen::Index(i), 0) = data.labels[i] == 1 ? 1.0 : -1.0;
    }
    return T;
  }
  return one_hot(data.labels, data.num_classes);
}

LossKind training_loss(int num_classes) { return num_classes == 2 ? LossKind::Squared : LossKind::CrossEntropy; }

double training_objective(const NetworkParams& params, const NetworkParams& init, const Matrix& F,
                          const Matrix& targets, LossKind loss, double l2_lambda) {
  const Matrix out = network_forward(params, F);
  return data_loss(out, targets, loss) + 0.5 * l2_lambda * (params.W - init.W).squaredNorm();
}

TrainedModel train(const NetworkParams& net, const LabeledDataset& data, Arch arch, const TrainConfig& cfg) {
  return run_training(net, data, arch, cfg, false);
}

TrainedModel adversarial_train(const NetworkParams& net, const LabeledDataset& data, Arch arch,
                               const TrainConfig& cfg) {
  require(cfg.adversarial.has_value(), ErrorCode::InvalidArgument, "adversarial training needs an attack config");
  return run_training(net, data, arch, cfg, true);
}

Matrix predict(const TrainedModel& model, const DataMatrix& X_context, const Matrix& X_query) {
  require(X_query.cols() == model.params.dim(), ErrorCode::ShapeError, "query dimension does not match network");
  return network_forward(model.params, arch_features(model.arch, X_context, X_query));
}

NTKDistanceCurve ntk_distance_sweep(const LabeledDataset& train_set, const LabeledDataset& test_set,
                                    const std::vector<Eigen::Index>& widths, Arch arch, const TrainConfig& cfg,
                                    double lambda, const SweepOptions& opts) {
  for (std::size_t k = 1; k < widths.size(); ++k)
    require(widths[k] > widths[k - 1], ErrorCode::InvalidArgument, "widths must be strictly increasing");
  require(!widths.empty() && widths.front() >= 1, ErrorCode::InvalidArgument, "widths must be positive");
  require(train_set.num_classes == test_set.num_classes, ErrorCode::ShapeError, "train and test class counts differ");
  const Matrix Ftr = arch_features(arch, train_set.data, train_set.data.rows());
  const Matrix Fte = arch_features(arch, train_set.data, test_set.data.rows());
  const Matrix Ytr = training_targets(train_set);
  const double ridge = opts.krr_ridge ? *opts.krr_ridge : double(train_set.data.n()) * lambda;
  const KRRModel krr = krr_fit(infinite_relu_ntk(Ftr), Ytr, ridge);
  const Matrix f_ntk = krr_predict(infinite_relu_ntk_cross(Fte, Ftr), krr);

  NTKDistanceCurve curve;
  curve.widths = widths;
  curve.arch = arch;
  curve.dataset_tag = opts.dataset_tag;
  curve.seed = cfg.seed;
  curve.distances.assign(widths.size(), 0.0);
  const Eigen::Index outputs = output_count(train_set.num_classes);
  parallel_for(widths.size(), opts.threads, [&](std::size_t k) {
    const NetworkParams net = init_network(widths[k], train_set.data.d(), opts.init_scale,
                                           derive_seed(cfg.seed, std::uint64_t(widths[k])), outputs);
    const TrainedModel model = train(net, train_set, arch, cfg);
    curve.distances[k] = ntk_distance(network_forward(model.params, Fte), f_ntk);
  });
  return curve;
}

Matrix loss_landscape(const TrainedModel& model, const LabeledDataset& data, double radius, int grid,
                      std::uint64_t seed, double l2_lambda) {
  require(grid >= 3 && grid % 2 == 1, ErrorCode::InvalidArgument, "grid must be an odd count >= 3");
  require(radius > 0.0, ErrorCode::InvalidArgument, "radius must be positive");
  const Matrix F = arch_features(model.arch, data.data, data.data.rows());
  const Matrix targets = training_targets(data);
  const LossKind loss = training_loss(data.num_classes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Matrix& W = model.params.W;
  auto direction = [&] {
    Matrix D(W.rows(), W.cols());
    for (Eigen::Index r = 0; r < D.rows(); ++r) {
      for (Eigen::Index c = 0; c < D.cols(); ++c) D(r, c) = nd(rng);
      const double dn = D.row(r).norm();
      if (dn > 0.0) D.row(r) *= W.row(r).norm() / dn;
    }
    return D;
  };
  const Matrix D1 = direction(), D2 = direction();
  Matrix surface(grid, grid);
  NetworkParams p = model.params;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double a = radius * double(2 * i - (grid - 1)) / double(grid - 1);
      const double b = radius * double(2 * j - (grid - 1)) / double(grid - 1);
      p.W = W + a * D1 + b * D2;
      surface(i, j) = training_objective(p, model.init_params, F, targets, loss, l2_lambda);
    }
  return surface;
}

}  // namespace linattn
