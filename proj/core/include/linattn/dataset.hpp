#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linattn/types.hpp"

namespace linattn {

struct LabeledDataset {
  DataMatrix data;
  std::vector<int> labels;
  int num_classes = 0;
};

struct IncoherenceReport {
  double mu_hat = 0.0;
  double nu = 1.0;
  double max_offdiag = 0.0;
  std::optional<bool> satisfied;
};

DataMatrix generate_sphere_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

// X = U diag(s) V^T with seeded orthogonal U (n x n) and V (d x n).
DataMatrix generate_spectrum_data(Eigen::Index n, Eigen::Index d,
                                  const std::vector<double>& singular_values, std::uint64_t seed,
                                  bool normalize = false);

// Labels from a seeded random linear teacher: sign for C = 2, argmax otherwise.
std::vector<int> linear_teacher_labels(const DataMatrix& X, int num_classes, std::uint64_t seed);

enum class DataFormat { Csv, Idx };
DataFormat parse_format(const std::string& name);

enum class Standardize { None, Scalar, PerFeature };

struct LoadOptions {
  std::string path;
  DataFormat format = DataFormat::Csv;
  std::string labels_path;  // idx only
  std::optional<std::vector<int>> class_filter;
  std::optional<std::size_t> max_per_class;
  Standardize standardize = Standardize::None;
  double mean = 0.0;
  double std = 1.0;
};

LabeledDataset load_dataset(const LoadOptions& opts);

// Mean/std step followed by row l2 normalization.
Matrix normalize_rows(Matrix rows, Standardize mode, double mean, double std);

IncoherenceReport check_incoherence(const DataMatrix& X, std::optional<double> mu_target = {});

Matrix one_hot(const std::vector<int>& labels, int num_classes);

// Rows [begin, end) as a new dataset.
LabeledDataset slice(const LabeledDataset& ds, Eigen::Index begin, Eigen::Index end);

}  // namespace linattn
