#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linattn/attack.hpp"
#include "linattn/dataset.hpp"
#include "linattn/influence.hpp"
#include "linattn/train.hpp"

namespace linattn {

// Synthetic labeled data: sphere rows or a prescribed geometric singular
// spectrum (optionally with a boosted leading direction), labels from a
// seeded linear teacher.
struct SyntheticSpec {
  std::string kind = "spectrum";  // "sphere" | "spectrum"
  Eigen::Index n_train = 64;
  Eigen::Index n_test = 16;
  Eigen::Index d = 128;
  int num_classes = 10;
  double s_max = 1.0;
  double s_min = 0.02;
  double lead_energy = 0.0;  // > 0 sets s_1^2 = lead_energy * (n_train + n_test)
  bool normalize = true;
};

struct SyntheticSplit {
  LabeledDataset train;
  LabeledDataset test;
};

SyntheticSplit make_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

double gram_condition_number(const DataMatrix& X);

struct Fig1Config {
  SyntheticSpec relu_data;
  SyntheticSpec attn_data;
  std::vector<Eigen::Index> widths{4, 8, 16, 32, 64, 128, 256, 512};
  TrainConfig train;
  double lambda = 1e-3;
  double init_scale = 0.01;
  std::vector<std::uint64_t> seeds{0};
  int threads = 1;
};

struct ArchCurves {
  Arch arch = Arch::Relu2L;
  std::vector<NTKDistanceCurve> per_seed;
  std::vector<double> mean_distances;
  double trend = 0.0;  // Spearman of mean distance against width
  std::vector<double> kappa_G;
};

struct Fig1Result {
  std::vector<Eigen::Index> widths;
  ArchCurves relu;
  ArchCurves attn;
};

Fig1Result run_fig1(const Fig1Config& cfg);

// Pinned desk-scale setup: 10-class cross-entropy training, well-conditioned
// data (s in [0.85, 1]) for relu2l and kappa(G) ~ 1e3 data for mlp_attn.
Fig1Config desk_fig1_config();

struct FlipConfig {
  SyntheticSpec data;
  Eigen::Index width = 256;
  double init_scale = 0.01;
  TrainConfig train;
  AttackConfig attack;
  double tau = 0.1;
  double lambda = 1e-3;
  Eigen::Index topk = 10;
  std::vector<std::uint64_t> seeds{0};
  Eigen::Index max_test_points = 0;  // 0 means every test row
  int threads = 1;
};

struct FlipSeedResult {
  std::uint64_t seed = 0;
  double kappa_G = 0.0;
  double flip_rate = 0.0;
  double spearman = 0.0;
  double topk = 0.0;
  Eigen::Index test_points = 0;
  bool stability_passed = true;
  std::vector<double> per_test_flip;
};

struct FlipResult {
  Arch arch = Arch::Relu2L;
  bool adversarial_training = false;
  double flip_rate = 0.0;
  double spearman = 0.0;
  double topk = 0.0;
  bool stability_passed = true;
  std::vector<FlipSeedResult> per_seed;
};

// Train, compute empirical-NTK leave-one-out influence per test point, attack
// the top-tau rows, recompute and compare. Dataset-level numbers average the
// per-test-point values, then the seeds.
FlipResult run_flip_experiment(const FlipConfig& cfg, Arch arch, bool adversarial_training);

// Pinned desk-scale setup: n = 64 + 16, d = 128, kappa(G) ~ 1e3, m = 256, PGD eps = 0.3.
FlipConfig desk_flip_config();

}  // namespace linattn
