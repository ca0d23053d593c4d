#include "linattn/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "linattn/error.hpp"

namespace linattn {

namespace {

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = nd(rng);
  return M;
}

Matrix orthonormal_columns(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rows, cols, rng));
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

std::uint32_t read_be32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  if (!in) fail(ErrorCode::ParseError, "truncated idx header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

struct RawData {
  Matrix rows;
  std::vector<int> labels;
};

RawData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::vector<std::vector<double>> feats;
  std::vector<int> labels;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": bad value '" + cell + "'");
      }
    }
    if (vals.size() < 2) fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": need label and features");
    if (!feats.empty() && vals.size() - 1 != feats.front().size())
      fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": inconsistent column count");
    double lab = vals.front();
    if (lab < 0 || lab != std::floor(lab))
      fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": label must be a non-negative integer");
    labels.push_back(static_cast<int>(lab));
    feats.emplace_back(vals.begin() + 1, vals.end());
    ++row;
  }
  if (feats.empty()) fail(ErrorCode::EmptyDataset, "'" + path + "' has no rows");
  RawData out;
  out.rows.resize(static_cast<Eigen::Index>(feats.size()), static_cast<Eigen::Index>(feats.front().size()));
  for (std::size_t i = 0; i < feats.size(); ++i)
    for (std::size_t j = 0; j < feats[i].size(); ++j)
      out.rows(Eigen::Index(i), Eigen::Index(j)) = feats[i][j];
  out.labels = std::move(labels);
  return out;
}

RawData read_idx(const std::string& images, const std::string& labels_path) {
  std::ifstream in(images, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + images + "'");
  if (read_be32(in) != 0x00000803u) fail(ErrorCode::UnsupportedFormat, "only unsigned-byte 3D idx images are supported");
  std::uint32_t count = read_be32(in), h = read_be32(in), w = read_be32(in);
  RawData out;
  out.rows.resize(count, Eigen::Index(h) * w);
  std::vector<unsigned char> buf(std::size_t(h) * w);
  for (std::uint32_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (!in) fail(ErrorCode::ParseError, "row " + std::to_string(i) + ": truncated image data");
    for (std::size_t j = 0; j < buf.size(); ++j) out.rows(i, Eigen::Index(j)) = buf[j] / 255.0;
  }
  if (labels_path.empty()) fail(ErrorCode::InvalidArgument, "idx format needs a labels file");
  std::ifstream lin(labels_path, std::ios::binary);
  if (!lin) fail(ErrorCode::IoError, "cannot open '" + labels_path + "'");
  if (read_be32(lin) != 0x00000801u) fail(ErrorCode::UnsupportedFormat, "only unsigned-byte idx labels are supported");
  if (read_be32(lin) != count) fail(ErrorCode::ParseError, "label count does not match image count");
  out.labels.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    char c = 0;
    if (!lin.get(c)) fail(ErrorCode::ParseError, "row " + std::to_string(i) + ": truncated label data");
    out.labels[i] = static_cast<unsigned char>(c);
  }
  return out;
}

}  // namespace

DataMatrix generate_sphere_data(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  require(n >= 1 && d >= 1, ErrorCode::EmptyDataset, "n and d must be positive");
  std::mt19937_64 rng(seed);
  Matrix X = gaussian(n, d, rng);
  X.rowwise().normalize();
  return DataMatrix(std::move(X));
}

DataMatrix generate_spectrum_data(Eigen::Index n, Eigen::Index d,
                                  const std::vector<double>& singular_values, std::uint64_t seed,
                                  bool normalize) {
  require(n >= 1 && d >= 1, ErrorCode::EmptyDataset, "n and d must be positive");
  require(n <= d, ErrorCode::RankInfeasible, "prescribed spectrum needs n <= d");
  require(Eigen::Index(singular_values.size()) == n, ErrorCode::BadSpectrum,
          "need exactly n singular values");
  for (std::size_t i = 0; i < singular_values.size(); ++i) {
    require(singular_values[i] > 0.0 && std::isfinite(singular_values[i]), ErrorCode::BadSpectrum,
            "singular values must be positive");
    if (i > 0)
      require(singular_values[i] <= singular_values[i - 1], ErrorCode::BadSpectrum,
              "singular values must be non-increasing");
  }
  std::mt19937_64 rng(seed);
  Matrix U = orthonormal_columns(n, n, rng);
  Matrix V = orthonormal_columns(d, n, rng);
  Vector s = Eigen::Map<const Vector>(singular_values.data(), n);
  Matrix X = U * s.asDiagonal() * V.transpose();
  if (normalize) X.rowwise().normalize();
  return DataMatrix(std::move(X));
}

std::vector<int> linear_teacher_labels(const DataMatrix& X, int num_classes, std::uint64_t seed) {
  require(num_classes >= 2, ErrorCode::InvalidArgument, "need at least two classes");
  std::mt19937_64 rng(seed);
  const int outs = num_classes == 2 ? 1 : num_classes;
  Matrix Wt = gaussian(X.d(), outs, rng);
  Matrix S = X.rows() * Wt;
  std::vector<int> labels(static_cast<std::size_t>(X.n()));
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    if (num_classes == 2) {
      labels[std::size_t(i)] = S(i, 0) > 0.0 ? 1 : 0;
    } else {
      Eigen::Index best = 0;
      S.row(i).maxCoeff(&best);
      labels[std::size_t(i)] = int(best);
    }
  }
  return labels;
}

DataFormat parse_format(const std::string& name) {
  if (name == "csv") return DataFormat::Csv;
  if (name == "idx") return DataFormat::Idx;
  fail(ErrorCode::UnsupportedFormat, "unknown data format '" + name + "'");
}

Matrix normalize_rows(Matrix rows, Standardize mode, double mean, double std) {
  switch (mode) {
    case Standardize::None: break;
    case Standardize::Scalar:
      require(std > 0.0, ErrorCode::InvalidArgument, "std must be positive");
      rows = (rows.array() - mean) / std;
      break;
    case Standardize::PerFeature: {
      Eigen::RowVectorXd mu = rows.colwise().mean();
      rows.rowwise() -= mu;
      Eigen::RowVectorXd sd = (rows.colwise().squaredNorm() / double(rows.rows())).cwiseSqrt();
      for (Eigen::Index j = 0; j < rows.cols(); ++j)
        if (sd(j) > 0.0) rows.col(j) /= sd(j);
      break;
    }
  }
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double nrm = rows.row(i).norm();
    require(nrm > 0.0, ErrorCode::DegenerateRow, "row " + std::to_string(i) + " has zero norm");
    rows.row(i) /= nrm;
  }
  return rows;
}

LabeledDataset load_dataset(const LoadOptions& opts) {
  {
    std::ifstream probe(opts.path);
    if (!probe) fail(ErrorCode::IoError, "cannot open '" + opts.path + "'");
  }
  RawData raw = opts.format == DataFormat::Csv ? read_csv(opts.path) : read_idx(opts.path, opts.labels_path);

  std::vector<Eigen::Index> keep;
  std::map<int, std::size_t> per_class;
  std::set<int> allowed;
  if (opts.class_filter) allowed.insert(opts.class_filter->begin(), opts.class_filter->end());
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    int lab = raw.labels[i];
    if (opts.class_filter && !allowed.count(lab)) continue;
    if (opts.max_per_class && per_class[lab] >= *opts.max_per_class) continue;
    ++per_class[lab];
    keep.push_back(Eigen::Index(i));
  }
  require(!keep.empty(), ErrorCode::EmptyDataset, "no rows left after class filtering");

  std::set<int> present;
  for (auto i : keep) present.insert(raw.labels[std::size_t(i)]);
  std::map<int, int> relabel;
  if (opts.class_filter) {
    for (int c : allowed) relabel.emplace(c, int(relabel.size()));
  } else {
    for (int c = 0; c <= *present.rbegin(); ++c) relabel.emplace(c, c);
  }

  Matrix rows(Eigen::Index(keep.size()), raw.rows.cols());
  LabeledDataset ds;
  ds.labels.reserve(keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    rows.row(Eigen::Index(k)) = raw.rows.row(keep[k]);
    ds.labels.push_back(relabel.at(raw.labels[std::size_t(keep[k])]));
  }
  ds.num_classes = int(relabel.size());
  ds.data = DataMatrix(normalize_rows(std::move(rows), opts.standardize, opts.mean, opts.std));
  return ds;
}

IncoherenceReport check_incoherence(const DataMatrix& X, std::optional<double> mu_target) {
  const Matrix G = X.rows() * X.rows().transpose();
  IncoherenceReport r;
  for (Eigen::Index i = 0; i < G.rows(); ++i)
    for (Eigen::Index j = 0; j < G.cols(); ++j)
      if (i != j) r.max_offdiag = std::max(r.max_offdiag, std::abs(G(i, j)));
  r.max_offdiag = std::min(r.max_offdiag, 1.0);
  const double d = double(X.d());
  r.mu_hat = r.max_offdiag * std::sqrt(d);
  r.nu = 1.0 + double(X.n() - 1) * r.mu_hat * r.mu_hat / d;
  if (mu_target) r.satisfied = r.mu_hat <= *mu_target;
  return r;
}

Matrix one_hot(const std::vector<int>& labels, int num_classes) {
  Matrix Y = Matrix::Zero(Eigen::Index(labels.size()), num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < num_classes, ErrorCode::LabelOutOfRange,
            "label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(num_classes) + ")");
    Y(Eigen::Index(i), labels[i]) = 1.0;
  }
  return Y;
}

LabeledDataset slice(const LabeledDataset& ds, Eigen::Index begin, Eigen::Index end) {
  require(begin >= 0 && begin < end && end <= ds.data.n(), ErrorCode::InvalidArgument, "bad slice range");
  LabeledDataset out;
  out.data = DataMatrix(ds.data.rows().middleRows(begin, end - begin));
  out.labels.assign(ds.labels.begin() + begin, ds.labels.begin() + end);
  out.num_classes = ds.num_classes;
  return out;
}

}  // namespace linattn
