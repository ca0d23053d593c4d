#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linattn/attack.hpp"
#include "linattn/dataset.hpp"
#include "linattn/ntk.hpp"

namespace linattn {

enum class Optimizer { Adam, Gd };

Optimizer parse_optimizer(const std::string& name);
std::string_view to_string(Optimizer opt);

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 128;
  double l2_lambda = 1e-3;
  Optimizer optimizer = Optimizer::Adam;
  std::optional<AttackConfig> adversarial;
  std::uint64_t seed = 0;
  double plateau_tol = 1e-6;  // relative epoch-to-epoch change; 0 disables early stopping
};

void validate(const TrainConfig& cfg);

struct TrainedModel {
  NetworkParams params;
  NetworkParams init_params;
  Arch arch = Arch::Relu2L;
  std::vector<double> loss_history;
};

// W ~ N(0, init_scale^2). Column 0 of the sign matrix alternates +1, -1;
// further columns are seeded shuffles of the same balanced vector.
NetworkParams init_network(Eigen::Index m, Eigen::Index d, double init_scale, std::uint64_t seed,
                           Eigen::Index outputs = 1);

// Number of network outputs for a class count: 1 for binary, C otherwise.
Eigen::Index output_count(int num_classes);

// +-1 column for binary data, one-hot rows otherwise.
Matrix training_targets(const LabeledDataset& data);

// Squared error for binary data, cross-entropy for multi-class.
LossKind training_loss(int num_classes);

// (1/2n) sum_i l(f(x_i), y_i) + (lambda/2) ||W - W0||^2 on precomputed features.
double training_objective(const NetworkParams& params, const NetworkParams& init, const Matrix& F,
                          const Matrix& targets, LossKind loss, double l2_lambda);

TrainedModel train(const NetworkParams& net, const LabeledDataset& data, Arch arch, const TrainConfig& cfg);

// cfg.adversarial must be set; every batch is replaced by its attacked version.
TrainedModel adversarial_train(const NetworkParams& net, const LabeledDataset& data, Arch arch,
                               const TrainConfig& cfg);

Matrix predict(const TrainedModel& model, const DataMatrix& X_context, const Matrix& X_query);

struct NTKDistanceCurve {
  std::vector<Eigen::Index> widths;
  std::vector<double> distances;
  Arch arch = Arch::Relu2L;
  std::string dataset_tag;
  std::uint64_t seed = 0;
};

struct SweepOptions {
  double init_scale = 0.01;
  // Ridge of the kernel predictor; defaults to n * lambda, the kernel-regime
  // counterpart of the 1/(2n)-normalized training objective.
  std::optional<double> krr_ridge;
  int threads = 1;
  std::string dataset_tag;
};

NTKDistanceCurve ntk_distance_sweep(const LabeledDataset& train_set, const LabeledDataset& test_set,
                                    const std::vector<Eigen::Index>& widths, Arch arch, const TrainConfig& cfg,
                                    double lambda, const SweepOptions& opts = {});

// grid x grid training objective along two filter-normalized random directions.
Matrix loss_landscape(const TrainedModel& model, const LabeledDataset& data, double radius, int grid,
                      std::uint64_t seed, double l2_lambda = 1e-3);

}  // namespace linattn
