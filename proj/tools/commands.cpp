#include "commands.hpp"

#include <algorithm>
#include <filesystem>

#include "linattn/attention.hpp"
#include "linattn/error.hpp"
#include "linattn/influence.hpp"
#include "linattn/io.hpp"
#include "linattn/malleability.hpp"
#include "linattn/ntk.hpp"
#include "linattn/spectral.hpp"

#ifndef LINATTN_VERSION
#define LINATTN_VERSION "0.0.0"
#endif

namespace linattn::cli {

Run::Run(std::string command, std::string out_dir)
    : command_(std::move(command)), out_(std::move(out_dir)), total_start_(Clock::now()) {
  std::filesystem::create_directories(out_);
}

void Run::close_stage() {
  if (!current_.empty())
    timings_[current_] += std::chrono::duration<double>(Clock::now() - started_).count();
  current_.clear();
}

void Run::stage(const std::string& name) {
  close_stage();
  current_ = name;
  started_ = Clock::now();
}

std::string Run::path(const std::string& file) const { return (std::filesystem::path(out_) / file).string(); }

void Run::finish(const json& config) {
  close_stage();
  json report = {{"command", command_},
                 {"version", "linattn " LINATTN_VERSION},
                 {"config", config},
                 {"results", results_},
                 {"stability", stability_}};
  write_text(path("report.json"), report.dump(2) + "\n");
  json t = timings_;
  json timing = {{"stages", t},
                 {"total_seconds", std::chrono::duration<double>(Clock::now() - total_start_).count()}};
  write_text(path("timings.json"), timing.dump(2) + "\n");
}

namespace {

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json stability_json(const std::string& what, const StabilityReport& r) {
  return {{"kernel", what},
          {"min_eig", r.min_eig},
          {"cond_number", r.cond_number},
          {"inversion_residual", r.inversion_residual},
          {"symmetry_residual", r.symmetry_residual},
          {"scale", r.scale},
          {"min_eig_ok", r.min_eig_ok},
          {"cond_ok", r.cond_ok},
          {"inversion_ok", r.inversion_ok},
          {"symmetry_ok", r.symmetry_ok},
          {"passed", r.passed}};
}

Standardize parse_standardize(const std::string& s) {
  if (s == "scalar") return Standardize::Scalar;
  if (s == "per_feature") return Standardize::PerFeature;
  return Standardize::None;
}

SyntheticSplit load_split(const ExperimentConfig& cfg, std::uint64_t seed) {
  const DatasetConfig& d = cfg.dataset;
  const SyntheticSpec& s = d.synthetic;
  if (d.source == "synthetic") return make_synthetic(s, seed);
  LabeledDataset all;
  if (d.source == "orthonormal") {
    DataMatrix X(Matrix::Identity(s.n_train + s.n_test, s.d));
    all = {X, linear_teacher_labels(X, s.num_classes, seed), s.num_classes};
  } else {
    LoadOptions o;
    o.path = d.path;
    o.format = parse_format(d.source);
    o.labels_path = d.labels_path;
    o.class_filter = d.class_filter;
    o.max_per_class = d.max_per_class;
    o.standardize = parse_standardize(d.standardize);
    o.mean = d.mean;
    o.std = d.std;
    all = load_dataset(o);
    require(all.data.n() >= s.n_train + s.n_test, ErrorCode::ConfigError,
            "dataset has fewer rows than n_train + n_test");
  }
  return {slice(all, 0, s.n_train), slice(all, s.n_train, s.n_train + s.n_test)};
}

Matrix train_kernel(const ExperimentConfig& cfg, const DataMatrix& X) {
  const std::string& t = cfg.kernel.type;
  if (t == "gram") return gram(X).K;
  if (t == "attention") return attention_kernel(X).K;
  if (t == "polynomial") return polynomial_kernel(X, cfg.kernel.degree).K;
  if (t == "ntk") return infinite_relu_ntk(arch_features(cfg.arch, X, X.rows())).K;
  return sequential_ntk(X, false).K;
}

// rows: test points, columns: training points
Matrix cross_kernel(const ExperimentConfig& cfg, const DataMatrix& X, const Matrix& Q) {
  const std::string& t = cfg.kernel.type;
  const Matrix ip = Q * X.rows().transpose();
  if (t == "gram") return ip;
  if (t == "polynomial") return ip.array().pow(double(cfg.kernel.degree)).matrix();
  if (t == "attention") {
    const Matrix C = X.rows().transpose() * X.rows();
    return Q * C * C * X.rows().transpose();
  }
  if (t == "ntk")
    return infinite_relu_ntk_cross(arch_features(cfg.arch, X, Q), arch_features(cfg.arch, X, X.rows()));
  return infinite_relu_ntk_cross(linearized_attention_query(X, Q).rows, linearized_attention(X).rows);
}

std::vector<int> predicted_labels(const Matrix& out) {
  std::vector<int> labels(static_cast<std::size_t>(out.rows()));
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    if (out.cols() == 1) {
      labels[std::size_t(i)] = out(i, 0) > 0 ? 1 : 0;
    } else {
      Eigen::Index best = 0;
      out.row(i).maxCoeff(&best);
      labels[std::size_t(i)] = int(best);
    }
  }
  return labels;
}

double accuracy(const TrainedModel& m, const DataMatrix& context, const LabeledDataset& ds) {
  const std::vector<int> p = predicted_labels(predict(m, context, ds.data.rows()));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.size(); ++i) hits += p[i] == ds.labels[i];
  return p.empty() ? 0.0 : double(hits) / double(p.size());
}

void write_dataset_csv(const std::string& path, const LabeledDataset& ds) {
  Matrix M(ds.data.n(), ds.data.d() + 1);
  M.leftCols(ds.data.d()) = ds.data.rows();
  for (Eigen::Index i = 0; i < ds.data.n(); ++i) M(i, ds.data.d()) = ds.labels[std::size_t(i)];
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < ds.data.d(); ++j) header.push_back("x" + std::to_string(j));
  header.push_back("label");
  write_matrix_csv(path, M, header);
}

TrainedModel fit_network(const ExperimentConfig& cfg, const LabeledDataset& train_set, std::uint64_t seed) {
  const NetworkParams net = init_network(cfg.width, train_set.data.d(), cfg.init_scale, derive_seed(seed, 31),
                                         output_count(train_set.num_classes));
  TrainConfig tc = cfg.train;
  tc.seed = derive_seed(seed, 32);
  if (cfg.adversarial_training) {
    tc.adversarial = cfg.attack;
    return adversarial_train(net, train_set, cfg.arch, tc);
  }
  return train(net, train_set, cfg.arch, tc);
}

json model_json(const TrainedModel& m, const SyntheticSplit& data) {
  return {{"epochs_run", m.loss_history.size()},
          {"final_objective", m.loss_history.empty() ? 0.0 : m.loss_history.back()},
          {"train_accuracy", accuracy(m, data.train.data, data.train)},
          {"test_accuracy", accuracy(m, data.train.data, data.test)}};
}

json flip_json(const FlipResult& r) {
  json seeds = json::array();
  for (const auto& s : r.per_seed)
    seeds.push_back({{"flip_rate", s.flip_rate},
                     {"spearman", s.spearman},
                     {"topk", s.topk},
                     {"test_points", s.test_points},
                     {"stability_passed", s.stability_passed},
                     {"per_test_flip", s.per_test_flip}});
  return {{"arch", std::string(to_string(r.arch))},
          {"adversarial_training", r.adversarial_training},
          {"flip_rate", r.flip_rate},
          {"spearman", r.spearman},
          {"topk", r.topk},
          {"stability_passed", r.stability_passed},
          {"per_seed", seeds}};
}

void flip_table_csv(const std::string& path, const std::vector<const FlipResult*>& rows) {
  Matrix M(Eigen::Index(rows.size()), 5);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FlipResult& r = *rows[i];
    M.row(Eigen::Index(i)) << (r.arch == Arch::MlpAttn ? 1.0 : 0.0), (r.adversarial_training ? 1.0 : 0.0),
        r.flip_rate, r.spearman, r.topk;
  }
  write_matrix_csv(path, M, {"mlp_attn", "adversarial", "flip_rate", "spearman", "topk"});
}

FlipConfig flip_config(const ExperimentConfig& cfg) {
  require(cfg.dataset.source == "synthetic", ErrorCode::ConfigError,
          "malleability runs on synthetic data; set dataset.source to synthetic");
  FlipConfig f;
  f.data = cfg.dataset.synthetic;
  f.width = cfg.width;
  f.init_scale = cfg.init_scale;
  f.train = cfg.train;
  f.attack = cfg.attack;
  f.tau = cfg.malleability.tau;
  f.lambda = cfg.lambda;
  f.topk = cfg.malleability.topk;
  f.seeds = cfg.seeds;
  f.max_test_points = cfg.malleability.max_test_points;
  f.threads = cfg.threads;
  return f;
}

}  // namespace

void cmd_gen_data(const ExperimentConfig& cfg, Run& run) {
  run.stage("generate");
  const SyntheticSplit data = load_split(cfg, cfg.seeds.front());
  write_dataset_csv(run.path("train.csv"), data.train);
  write_dataset_csv(run.path("test.csv"), data.test);
  const IncoherenceReport inc = check_incoherence(data.train.data);
  run.results() = {{"n_train", data.train.data.n()},
                   {"n_test", data.test.data.n()},
                   {"d", data.train.data.d()},
                   {"classes", data.train.num_classes},
                   {"unit_rows", data.train.data.has_unit_rows()},
                   {"kappa_G", gram_condition_number(data.train.data)},
                   {"incoherence", {{"mu_hat", inc.mu_hat}, {"nu", inc.nu}, {"max_offdiag", inc.max_offdiag}}}};
}

void cmd_kernel(const ExperimentConfig& cfg, Run& run) {
  run.stage("kernel");
  const SyntheticSplit data = load_split(cfg, cfg.seeds.front());
  const Matrix K = train_kernel(cfg, data.train.data);
  write_matrix_csv(run.path("kernel.csv"), K);
  run.stage("spectrum");
  const Spectrum s = spectrum(K);
  run.results() = {{"type", cfg.kernel.type},
                   {"n", K.rows()},
                   {"symmetry_defect", symmetry_defect(K)},
                   {"eigenvalues", s.values},
                   {"effective_rank", s.effective_rank},
                   {"condition_number", condition_number(s)}};
  run.stability().push_back(stability_json(cfg.kernel.type, stability_check(K, cfg.lambda)));
}

void cmd_spectral_check(const ExperimentConfig& cfg, Run& run) {
  run.stage("spectral");
  const SyntheticSplit data = load_split(cfg, cfg.seeds.front());
  const DataMatrix& X = data.train.data;
  const double g = spectral_norm(X.rows() * X.rows().transpose());
  json transfer = json::array();
  for (int k = 0; k <= 3; ++k)
    transfer.push_back({{"k", k},
                        {"residual", verify_spectral_transfer(X, k)},
                        {"relative", verify_spectral_transfer(X, k) / std::pow(g, k + 1)}});
  const ConditioningReport r = verify_cubic_conditioning(X, cfg.spectral.layers);
  const IncoherenceReport inc = check_incoherence(X);
  run.results() = {{"n", X.n()},
                   {"spectral_transfer", transfer},
                   {"kappa_G", r.kappa_G},
                   {"kappa_Gtilde", r.kappa_Gtilde},
                   {"predicted", r.predicted},
                   {"layers", r.layers},
                   {"relative_error", r.relative_error},
                   {"rank_restricted", r.rank_restricted},
                   {"rank", r.rank},
                   {"width_requirement", width_requirement(r.kappa_G, X.n(), cfg.spectral.eps)},
                   {"incoherence", {{"mu_hat", inc.mu_hat}, {"nu", inc.nu}}}};
}

void cmd_ntk_sweep(const ExperimentConfig& cfg, Run& run) {
  json curves = json::array();
  Matrix table(Eigen::Index(cfg.widths.size()), Eigen::Index(cfg.seeds.size()) + 2);
  for (std::size_t w = 0; w < cfg.widths.size(); ++w) table(Eigen::Index(w), 0) = double(cfg.widths[w]);
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    run.stage("sweep");
    const std::uint64_t seed = cfg.seeds[s];
    const SyntheticSplit data = load_split(cfg, seed);
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    SweepOptions o;
    o.init_scale = cfg.init_scale;
    o.threads = cfg.threads;
    o.dataset_tag = cfg.dataset.source;
    const NTKDistanceCurve c = ntk_distance_sweep(data.train, data.test, cfg.widths, cfg.arch, tc, cfg.lambda, o);
    for (std::size_t w = 0; w < c.distances.size(); ++w) table(Eigen::Index(w), Eigen::Index(s) + 1) = c.distances[w];
    curves.push_back({{"seed", seed}, {"widths", c.widths}, {"distances", c.distances}});
    run.stage("stability");
    const Matrix F = arch_features(cfg.arch, data.train.data, data.train.data.rows());
    run.stability().push_back(stability_json(
        "ntk_infinite seed " + std::to_string(seed),
        stability_check(infinite_relu_ntk(F).K, double(data.train.data.n()) * cfg.lambda)));
  }
  const Eigen::Index S = Eigen::Index(cfg.seeds.size());
  table.col(S + 1) = table.middleCols(1, S).rowwise().mean();
  std::vector<std::string> header{"width"};
  for (auto seed : cfg.seeds) header.push_back("seed_" + std::to_string(seed));
  header.push_back("mean");
  write_matrix_csv(run.path("curve.csv"), table, header);
  const SpearmanResult trend = spearman(table.col(0), table.col(S + 1));
  run.results() = {{"arch", std::string(to_string(cfg.arch))},
                   {"widths", cfg.widths},
                   {"curves", curves},
                   {"mean_distances", to_std(table.col(S + 1))},
                   {"trend", trend.rho},
                   {"trend_degenerate", trend.degenerate}};
}

void cmd_influence(const ExperimentConfig& cfg, Run& run) {
  run.stage("kernel");
  const SyntheticSplit data = load_split(cfg, cfg.seeds.front());
  const Matrix K = train_kernel(cfg, data.train.data);
  const Matrix Kt = cross_kernel(cfg, data.train.data, data.test.data.rows());
  const Matrix Y = training_targets(data.train), Yt = training_targets(data.test);
  run.stability().push_back(stability_json(cfg.kernel.type, stability_check(K, cfg.lambda)));
  run.stage("influence");
  const Matrix I = loo_influence_batch(K, Y, cfg.lambda, Kt, Yt);
  write_matrix_csv(run.path("influence.csv"), I);
  const KRRModel m = krr_fit({K, KernelKind::Gram}, Y, cfg.lambda);
  const Matrix pred = krr_predict(Kt, m);
  json top = json::array();
  for (Eigen::Index t = 0; t < I.cols(); ++t) {
    const HighInfluenceSet H = select_high_influence(I.col(t), cfg.malleability.tau);
    top.push_back(H.indices);
  }
  run.results() = {{"type", cfg.kernel.type},
                   {"n_train", K.rows()},
                   {"n_test", Kt.rows()},
                   {"test_mse", (pred - Yt).squaredNorm() / double(Yt.rows())},
                   {"high_influence", top}};
}

void cmd_attack(const ExperimentConfig& cfg, Run& run) {
  run.stage("train");
  const std::uint64_t seed = cfg.seeds.front();
  const SyntheticSplit data = load_split(cfg, seed);
  const TrainedModel model = fit_network(cfg, data.train, seed);
  run.stage("attack");
  const DataMatrix& X = data.train.data;
  const Matrix T = training_targets(data.train);
  const LossKind loss = training_loss(data.train.num_classes);
  Matrix attacked = X.rows();
  Vector before(X.n()), after(X.n());
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    GradientProvider g = network_gradient_provider(model.params, cfg.arch, X, i, loss);
    const Vector y = T.row(i).transpose();
    const Vector xa = run_attack(g, X.row(i), y, cfg.attack);
    attacked.row(i) = xa.transpose();
    before(i) = g(X.row(i), y).loss;
    after(i) = g(xa, y).loss;
  }
  write_matrix_csv(run.path("attacked.csv"), attacked);
  run.results() = {{"model", model_json(model, data)},
                   {"attack", std::string(to_string(cfg.attack.kind))},
                   {"mean_loss_before", before.mean()},
                   {"mean_loss_after", after.mean()},
                   {"max_linf_displacement", (attacked - X.rows()).cwiseAbs().maxCoeff()},
                   {"loss_before", to_std(before)},
                   {"loss_after", to_std(after)}};
}

void cmd_malleability(const ExperimentConfig& cfg, Run& run) {
  run.stage("flip");
  const FlipConfig f = flip_config(cfg);
  const FlipResult r = run_flip_experiment(f, cfg.arch, cfg.adversarial_training);
  flip_table_csv(run.path("flip.csv"), {&r});
  for (std::size_t i = 0; i < r.per_seed.size(); ++i)
    run.stability().push_back({{"kernel", "empirical_ntk seed " + std::to_string(cfg.seeds[i])},
                               {"passed", r.per_seed[i].stability_passed}});
  run.stage("measure");
  // mu_M of the attention-kernel influence of training point 0 on the first test point
  const SyntheticSplit data = load_split(cfg, cfg.seeds.front());
  const Matrix Y = training_targets(data.train);
  const Vector q = data.test.data.row(0);
  const Vector yq = training_targets(data.test).row(0).transpose();
  const double lambda = cfg.lambda;
  InfluenceFn fn = [&](const DataMatrix& X, Eigen::Index i) {
    const Matrix C = X.rows().transpose() * X.rows();
    const Vector kt = X.rows() * (C * (C * q));
    return loo_influence(attention_kernel(X).K, Y, lambda, kt, yq).scores(i);
  };
  const McEstimate mu = malleability_measure(fn, data.train, cfg.malleability.mu_eps, cfg.malleability.mu_trials,
                                             derive_seed(cfg.seeds.front(), 41));
  const SensitivityGap gap = sensitivity_gap(data.train.data, Y, cfg.lambda);
  run.results() = {{"flip", flip_json(r)},
                   {"mu_M", {{"mean", mu.mean}, {"std_error", mu.std_error}, {"eps", cfg.malleability.mu_eps}}},
                   {"sensitivity_gap", {{"S_att", gap.S_att}, {"S_relu", gap.S_relu}, {"ratio", gap.ratio}}}};
}

void cmd_intervene(const ExperimentConfig& cfg, Run& run) {
  run.stage("train");
  const std::uint64_t seed = cfg.seeds.front();
  const SyntheticSplit data = load_split(cfg, seed);
  const TrainedModel model = fit_network(cfg, data.train, seed);
  run.stage("influence");
  const Matrix K = train_kernel(cfg, data.train.data);
  const Matrix Kt = cross_kernel(cfg, data.train.data, data.test.data.rows());
  const Matrix T = training_targets(data.train);
  run.stability().push_back(stability_json(cfg.kernel.type, stability_check(K, cfg.lambda)));
  // total influence over the test set
  const Vector I = loo_influence_batch(K, T, cfg.lambda, Kt, training_targets(data.test)).rowwise().sum();
  run.stage("intervene");
  const LossKind loss = training_loss(data.train.num_classes);
  GradientFactory factory = [&](Eigen::Index i) {
    return network_gradient_provider(model.params, cfg.arch, data.train.data, i, loss);
  };
  const InterventionKind kind = parse_intervention(cfg.malleability.intervention);
  const LabeledDataset changed = run_intervention(data.train, I, kind, cfg.attack, cfg.malleability.tau, factory, T);
  write_dataset_csv(run.path("intervened_train.csv"), changed);
  run.stage("retrain");
  const TrainedModel retrained = fit_network(cfg, changed, seed);
  const SyntheticSplit after{changed, data.test};
  run.results() = {{"intervention", std::string(to_string(kind))},
                   {"selected", select_high_influence(I, cfg.malleability.tau).indices},
                   {"n_before", data.train.data.n()},
                   {"n_after", changed.data.n()},
                   {"before", model_json(model, data)},
                   {"after", model_json(retrained, after)}};
}

void cmd_train(const ExperimentConfig& cfg, Run& run) {
  run.stage("train");
  const std::uint64_t seed = cfg.seeds.front();
  const SyntheticSplit data = load_split(cfg, seed);
  const TrainedModel model = fit_network(cfg, data.train, seed);
  Matrix hist(Eigen::Index(model.loss_history.size()), 2);
  for (std::size_t e = 0; e < model.loss_history.size(); ++e)
    hist.row(Eigen::Index(e)) << double(e + 1), model.loss_history[e];
  write_matrix_csv(run.path("loss_history.csv"), hist, {"epoch", "objective"});
  run.results() = {{"model", model_json(model, data)}, {"loss_history", model.loss_history}};
}

void cmd_landscape(const ExperimentConfig& cfg, Run& run) {
  run.stage("train");
  const std::uint64_t seed = cfg.seeds.front();
  const SyntheticSplit data = load_split(cfg, seed);
  const TrainedModel model = fit_network(cfg, data.train, seed);
  run.stage("landscape");
  const Matrix S = loss_landscape(model, data.train, cfg.landscape.radius, cfg.landscape.grid,
                                  derive_seed(seed, 51), cfg.train.l2_lambda);
  write_matrix_csv(run.path("landscape.csv"), S);
  const int c = cfg.landscape.grid / 2;
  run.results() = {{"model", model_json(model, data)},
                   {"grid", cfg.landscape.grid},
                   {"radius", cfg.landscape.radius},
                   {"center", S(c, c)},
                   {"min", S.minCoeff()},
                   {"max", S.maxCoeff()}};
}

json reproduce_fig1(int threads, Run& run) {
  run.stage("fig1");
  Fig1Config cfg = desk_fig1_config();
  cfg.threads = threads;
  const Fig1Result r = run_fig1(cfg);
  Matrix M(Eigen::Index(r.widths.size()), 3);
  for (std::size_t w = 0; w < r.widths.size(); ++w)
    M.row(Eigen::Index(w)) << double(r.widths[w]), r.relu.mean_distances[w], r.attn.mean_distances[w];
  write_matrix_csv(run.path("fig1_curves.csv"), M, {"width", "relu2l", "mlp_attn"});
  auto curves = [](const ArchCurves& a) {
    json per_seed = json::array();
    for (const auto& c : a.per_seed) per_seed.push_back({{"seed", c.seed}, {"distances", c.distances}});
    return json{{"mean_distances", a.mean_distances}, {"trend", a.trend}, {"kappa_G", a.kappa_G},
                {"per_seed", per_seed}};
  };
  const bool relu_ok = r.relu.trend <= -0.5, attn_ok = r.attn.trend >= 0.0;
  run.results() = {{"widths", r.widths},
                   {"relu2l", curves(r.relu)},
                   {"mlp_attn", curves(r.attn)},
                   {"summary",
                    {{"relu2l_trend_negative", relu_ok},
                     {"mlp_attn_trend_nonnegative", attn_ok},
                     {"pass", relu_ok && attn_ok}}}};
  return to_json(cfg);
}

json reproduce_table2(int threads, Run& run) {
  FlipConfig cfg = desk_flip_config();
  cfg.threads = threads;
  run.stage("relu2l");
  const FlipResult relu = run_flip_experiment(cfg, Arch::Relu2L, false);
  run.stage("mlp_attn");
  const FlipResult attn = run_flip_experiment(cfg, Arch::MlpAttn, false);
  flip_table_csv(run.path("table2.csv"), {&relu, &attn});
  const double ratio = attn.flip_rate / relu.flip_rate;
  run.results() = {{"relu2l", flip_json(relu)},
                   {"mlp_attn", flip_json(attn)},
                   {"summary", {{"ratio", ratio}, {"threshold", 2.0}, {"pass", ratio > 2.0}}}};
  return to_json(cfg);
}

json reproduce_table4(int threads, Run& run) {
  FlipConfig cfg = desk_flip_config();
  cfg.threads = threads;
  run.stage("standard");
  const FlipResult standard = run_flip_experiment(cfg, Arch::Relu2L, false);
  run.stage("adversarial");
  const FlipResult adv = run_flip_experiment(cfg, Arch::Relu2L, true);
  flip_table_csv(run.path("table4.csv"), {&standard, &adv});
  run.results() = {{"standard", flip_json(standard)},
                   {"adversarial", flip_json(adv)},
                   {"summary", {{"increase", adv.flip_rate - standard.flip_rate},
                                {"pass", adv.flip_rate > standard.flip_rate}}}};
  return to_json(cfg);
}

}  // namespace linattn::cli
