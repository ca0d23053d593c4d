#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "linattn/attack.hpp"
#include "linattn/dataset.hpp"
#include "linattn/experiments.hpp"
#include "linattn/train.hpp"

namespace linattn::cli {

using nlohmann::json;

struct DatasetConfig {
  std::string source = "synthetic";  // synthetic | orthonormal | csv | idx
  SyntheticSpec synthetic;
  std::string path;
  std::string labels_path;
  std::optional<std::vector<int>> class_filter;
  std::optional<std::size_t> max_per_class;
  std::string standardize = "none";  // none | scalar | per_feature
  double mean = 0.0;
  double std = 1.0;
};

struct MalleabilityConfig {
  double tau = 0.1;
  Eigen::Index topk = 10;
  Eigen::Index max_test_points = 0;
  double mu_eps = 0.05;
  int mu_trials = 100;
  std::string intervention = "curated";
};

struct KernelConfig {
  std::string type = "attention";  // gram | attention | polynomial | ntk | sequential_ntk
  int degree = 3;
};

struct SpectralConfig {
  int layers = 1;
  double eps = 0.1;
};

struct LandscapeConfig {
  double radius = 1.0;
  int grid = 21;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  Arch arch = Arch::Relu2L;
  std::vector<Eigen::Index> widths{4, 8, 16, 32, 64, 128, 256, 512};
  Eigen::Index width = 256;
  double init_scale = 0.01;
  double lambda = 1e-3;
  TrainConfig train;
  AttackConfig attack;
  bool adversarial_training = false;
  MalleabilityConfig malleability;
  KernelConfig kernel;
  SpectralConfig spectral;
  LandscapeConfig landscape;
  std::vector<std::uint64_t> seeds{0};
  int threads = 1;
  std::string out;
};

// Throws Error(ConfigError) on unknown keys, wrong types or invalid values.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

// Every field, defaults included.
json to_json(const ExperimentConfig& cfg);
json to_json(const Fig1Config& cfg);
json to_json(const FlipConfig& cfg);

}  // namespace linattn::cli
