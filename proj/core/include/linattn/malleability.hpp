#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "linattn/attack.hpp"
#include "linattn/dataset.hpp"
#include "linattn/types.hpp"

namespace linattn {

struct HighInfluenceSet {
  std::vector<Eigen::Index> indices;
  double tau = 0.1;
  double quantile_value = 0.0;
};

// Nearest-rank (1 - tau) quantile; members strictly exceed it.
HighInfluenceSet select_high_influence(const Vector& I, double tau);

double flip_rate(const Vector& I_orig, const Vector& I_adv, const HighInfluenceSet& H);

struct SpearmanResult {
  double rho = 0.0;
  bool degenerate = false;
};

SpearmanResult spearman(const Vector& a, const Vector& b);

double topk_stability(const Vector& a, const Vector& b, Eigen::Index K);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Influence of training point i computed on (possibly perturbed) data.
using InfluenceFn = std::function<double(const DataMatrix&, Eigen::Index)>;

McEstimate malleability_measure(const InfluenceFn& influence, const LabeledDataset& dataset, double eps,
                                int trials, std::uint64_t seed);

enum class InterventionKind { Curated, Transformed, Adversarial };

InterventionKind parse_intervention(const std::string& name);
std::string_view to_string(InterventionKind kind);

using GradientFactory = std::function<GradientProvider(Eigen::Index)>;

// targets holds the per-row target vectors the attack ascends against.
LabeledDataset run_intervention(const LabeledDataset& dataset, const Vector& I, InterventionKind kind,
                                const AttackConfig& attack, double tau, const GradientFactory& model_grad,
                                const Matrix& targets);

struct SensitivityGap {
  double S_att = 0.0;
  double S_relu = 0.0;
  double ratio = 0.0;
};

SensitivityGap sensitivity_gap(const DataMatrix& X, const Matrix& y, double lambda);

}  // namespace linattn
