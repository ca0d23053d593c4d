#include "linattn/malleability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "linattn/error.hpp"
#include "linattn/influence.hpp"
#include "linattn/spectral.hpp"

namespace linattn {

namespace {

std::vector<double> average_ranks(const Vector& v) {
  const auto n = std::size_t(v.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return v(Eigen::Index(a)) < v(Eigen::Index(b));
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v(Eigen::Index(order[j + 1])) == v(Eigen::Index(order[i]))) ++j;
    const double r = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::vector<Eigen::Index> top_k(const Vector& v, Eigen::Index K) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index(0));
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  idx.resize(std::size_t(K));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

HighInfluenceSet select_high_influence(const Vector& I, double tau) {
  require(tau > 0.0 && tau < 1.0, ErrorCode::BadThreshold, "tau must lie in (0, 1)");
  require(I.size() >= 1, ErrorCode::EmptyDataset, "empty influence vector");
  const auto n = I.size();
  std::vector<double> sorted(I.data(), I.data() + n);
  std::sort(sorted.begin(), sorted.end());
  auto rank = Eigen::Index(std::ceil((1.0 - tau) * double(n) - 1e-9));
  rank = std::clamp<Eigen::Index>(rank, 1, n);
  HighInfluenceSet H;
  H.tau = tau;
  H.quantile_value = sorted[std::size_t(rank - 1)];
  for (Eigen::Index i = 0; i < n; ++i)
    if (I(i) > H.quantile_value) H.indices.push_back(i);
  return H;
}

double flip_rate(const Vector& I_orig, const Vector& I_adv, const HighInfluenceSet& H) {
  require(I_orig.size() == I_adv.size(), ErrorCode::ShapeError, "influence vectors differ in length");
  require(!H.indices.empty(), ErrorCode::EmptySelection, "high-influence set is empty");
  std::size_t flips = 0;
  for (Eigen::Index i : H.indices) {
    require(i >= 0 && i < I_orig.size(), ErrorCode::InvalidArgument, "selection index out of range");
    if (I_orig(i) * I_adv(i) < 0.0) ++flips;
  }
  return double(flips) / double(H.indices.size());
}

SpearmanResult spearman(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), ErrorCode::ShapeError, "score vectors differ in length");
  require(a.size() >= 2, ErrorCode::InvalidArgument, "spearman needs at least two scores");
  const auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = double(ra.size());
  const double mean = (n + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean, db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  SpearmanResult r;
  if (saa == 0.0 || sbb == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.rho = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  return r;
}

double topk_stability(const Vector& a, const Vector& b, Eigen::Index K) {
  require(K >= 1, ErrorCode::BadK, "K must be >= 1");
  require(a.size() == b.size(), ErrorCode::ShapeError, "score vectors differ in length");
  require(K <= a.size(), ErrorCode::BadK, "K exceeds the number of scores");
  const auto ta = top_k(a, K), tb = top_k(b, K);
  std::vector<Eigen::Index> common;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
  return double(common.size()) / double(K);
}

McEstimate malleability_measure(const InfluenceFn& influence, const LabeledDataset& dataset, double eps,
                                int trials, std::uint64_t seed) {
  require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");
  require(eps >= 0.0, ErrorCode::InvalidArgument, "eps must be non-negative");
  const Eigen::Index n = dataset.data.n();
  std::vector<double> base(static_cast<std::size_t>(n), std::nan(""));
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::seed_seq ss{seed, std::uint64_t(t)};
    std::mt19937_64 rng(ss);
    const Eigen::Index i = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    double diff = 0.0;
    if (eps > 0.0) {
      std::uniform_real_distribution<double> u(-eps, eps);
      Matrix rows = dataset.data.rows();
      for (Eigen::Index j = 0; j < rows.cols(); ++j) rows(i, j) += u(rng);
      if (std::isnan(base[std::size_t(i)])) base[std::size_t(i)] = influence(dataset.data, i);
      diff = std::abs(base[std::size_t(i)] - influence(DataMatrix(std::move(rows)), i));
    }
    sum += diff;
    sumsq += diff * diff;
  }
  McEstimate est;
  est.mean = sum / trials;
  const double var = trials > 1 ? std::max(0.0, (sumsq - trials * est.mean * est.mean) / (trials - 1)) : 0.0;
  est.std_error = std::sqrt(var / trials);
  return est;
}

InterventionKind parse_intervention(const std::string& name) {
  if (name == "curated") return InterventionKind::Curated;
  if (name == "transformed") return InterventionKind::Transformed;
  if (name == "adversarial") return InterventionKind::Adversarial;
  fail(ErrorCode::InvalidArgument, "unknown intervention '" + name + "'");
}

std::string_view to_string(InterventionKind kind) {
  switch (kind) {
    case InterventionKind::Curated: return "curated";
    case InterventionKind::Transformed: return "transformed";
    case InterventionKind::Adversarial: return "adversarial";
  }
  return "unknown";
}

LabeledDataset run_intervention(const LabeledDataset& dataset, const Vector& I, InterventionKind kind,
                                const AttackConfig& attack, double tau, const GradientFactory& model_grad,
                                const Matrix& targets) {
  const Eigen::Index n = dataset.data.n();
  require(I.size() == n && targets.rows() == n, ErrorCode::ShapeError, "influence or targets do not match data");
  const Matrix& X = dataset.data.rows();
  auto attacked_row = [&](Eigen::Index i) {
    return run_attack(model_grad(i), X.row(i).transpose(), targets.row(i).transpose(), attack);
  };
  if (kind == InterventionKind::Adversarial) {
    Matrix rows = X;
    for (Eigen::Index i = 0; i < n; ++i) rows.row(i) = attacked_row(i).transpose();
    return {DataMatrix(std::move(rows)), dataset.labels, dataset.num_classes};
  }
  const HighInfluenceSet H = select_high_influence(I, tau);
  require(!H.indices.empty(), ErrorCode::EmptySelection, "high-influence set is empty");
  if (kind == InterventionKind::Transformed) {
    Matrix rows = X;
    for (Eigen::Index i : H.indices) rows.row(i) = attacked_row(i).transpose();
    return {DataMatrix(std::move(rows)), dataset.labels, dataset.num_classes};
  }
  std::vector<bool> drop(static_cast<std::size_t>(n), false);
  for (Eigen::Index i : H.indices) drop[std::size_t(i)] = true;
  Matrix rows(n - Eigen::Index(H.indices.size()), X.cols());
  LabeledDataset out;
  out.num_classes = dataset.num_classes;
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (drop[std::size_t(i)]) continue;
    rows.row(k++) = X.row(i);
    out.labels.push_back(dataset.labels[std::size_t(i)]);
  }
  out.data = DataMatrix(std::move(rows));
  return out;
}

SensitivityGap sensitivity_gap(const DataMatrix& X, const Matrix& y, double lambda) {
  require(lambda > 0.0, ErrorCode::BadLambda, "lambda must be positive");
  const double lambda1 = spectral_norm(X.rows() * X.rows().transpose());
  SensitivityGap g;
  g.S_att = intrinsic_sensitivity(double(X.n()) * lambda1, y.norm(), lambda);
  g.S_relu = intrinsic_sensitivity(1.0, y.norm(), lambda);
  g.ratio = double(X.n()) * lambda1;
  return g;
}

}  // namespace linattn
