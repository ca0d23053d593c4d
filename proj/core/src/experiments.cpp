#include "linattn/experiments.hpp"

#include <cmath>

#include "linattn/error.hpp"
#include "linattn/malleability.hpp"
#include "linattn/ntk.hpp"
#include "linattn/parallel.hpp"
#include "linattn/spectral.hpp"

namespace linattn {

SyntheticSplit make_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  require(spec.n_train >= 2 && spec.n_test >= 1, ErrorCode::InvalidArgument, "need n_train >= 2 and n_test >= 1");
  const Eigen::Index total = spec.n_train + spec.n_test;
  DataMatrix X;
  if (spec.kind == "sphere") {
    X = generate_sphere_data(total, spec.d, derive_seed(seed, 11));
  } else if (spec.kind == "spectrum") {
    require(spec.s_max >= spec.s_min && spec.s_min > 0.0, ErrorCode::BadSpectrum, "need s_max >= s_min > 0");
    std::vector<double> s(static_cast<std::size_t>(total));
    for (Eigen::Index i = 0; i < total; ++i) {
      const double frac = total > 1 ? double(i) / double(total - 1) : 0.0;
      s[std::size_t(i)] = spec.s_max * std::pow(spec.s_min / spec.s_max, frac);
    }
    if (spec.lead_energy > 0.0) s[0] = std::max(s[0], std::sqrt(spec.lead_energy * double(total)));
    X = generate_spectrum_data(total, spec.d, s, derive_seed(seed, 12), spec.normalize);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown synthetic kind '" + spec.kind + "'");
  }
  LabeledDataset all{X, linear_teacher_labels(X, spec.num_classes, derive_seed(seed, 13)), spec.num_classes};
  return {slice(all, 0, spec.n_train), slice(all, spec.n_train, total)};
}

double gram_condition_number(const DataMatrix& X) {
  return condition_number(spectrum(X.rows() * X.rows().transpose()));
}

namespace {

double spearman_vs_index(const std::vector<double>& v) {
  Vector a(Eigen::Index(v.size())), b(Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    a(Eigen::Index(i)) = double(i);
    b(Eigen::Index(i)) = v[i];
  }
  return spearman(a, b).rho;
}

ArchCurves sweep_arch(const Fig1Config& cfg, Arch arch, const SyntheticSpec& spec) {
  ArchCurves out;
  out.arch = arch;
  out.mean_distances.assign(cfg.widths.size(), 0.0);
  for (std::uint64_t seed : cfg.seeds) {
    const SyntheticSplit data = make_synthetic(spec, seed);
    out.kappa_G.push_back(gram_condition_number(data.train.data));
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(seed, 21);
    SweepOptions opts;
    opts.init_scale = cfg.init_scale;
    opts.threads = cfg.threads;
    opts.dataset_tag = spec.kind;
    NTKDistanceCurve c = ntk_distance_sweep(data.train, data.test, cfg.widths, arch, tc, cfg.lambda, opts);
    c.seed = seed;
    for (std::size_t k = 0; k < c.distances.size(); ++k)
      out.mean_distances[k] += c.distances[k] / double(cfg.seeds.size());
    out.per_seed.push_back(std::move(c));
  }
  out.trend = spearman_vs_index(out.mean_distances);
  return out;
}

}  // namespace

Fig1Result run_fig1(const Fig1Config& cfg) {
  require(!cfg.seeds.empty(), ErrorCode::InvalidArgument, "fig1 needs at least one seed");
  require(cfg.widths.size() >= 2, ErrorCode::InvalidArgument, "fig1 needs at least two widths");
  Fig1Result r;
  r.widths = cfg.widths;
  r.relu = sweep_arch(cfg, Arch::Relu2L, cfg.relu_data);
  r.attn = sweep_arch(cfg, Arch::MlpAttn, cfg.attn_data);
  return r;
}

Fig1Config desk_fig1_config() {
  Fig1Config c;
  c.relu_data.s_min = 0.85;
  c.attn_data.s_min = 0.02;
  c.train.epochs = 200;
  c.train.batch_size = 16;
  c.seeds = {0, 1, 2, 3, 4, 5};
  return c;
}

FlipConfig desk_flip_config() {
  FlipConfig c;
  c.data.s_min = 0.02;
  c.train.epochs = 200;
  c.train.batch_size = 128;
  c.seeds = {0, 1, 2, 3};
  return c;
}

FlipResult run_flip_experiment(const FlipConfig& cfg, Arch arch, bool adversarial_training) {
  require(!cfg.seeds.empty(), ErrorCode::InvalidArgument, "flip experiment needs at least one seed");
  FlipResult res;
  res.arch = arch;
  res.adversarial_training = adversarial_training;
  for (std::uint64_t seed : cfg.seeds) {
    const SyntheticSplit data = make_synthetic(cfg.data, seed);
    const DataMatrix& X = data.train.data;
    const Matrix Y = training_targets(data.train);
    const Matrix Yt = training_targets(data.test);
    const NetworkParams net = init_network(cfg.width, X.d(), cfg.init_scale, derive_seed(seed, 31),
                                           output_count(data.train.num_classes));
    TrainConfig tc = cfg.train;
    tc.seed = derive_seed(seed, 32);
    TrainedModel model;
    if (adversarial_training) {
      tc.adversarial = cfg.attack;
      model = adversarial_train(net, data.train, arch, tc);
    } else {
      tc.adversarial.reset();
      model = train(net, data.train, arch, tc);
    }
    const NetworkParams& p = model.params;
    const Matrix F = arch_features(arch, X, X.rows());
    const Matrix K = empirical_ntk(p, F).K;
    const Matrix Kt = empirical_ntk_cross(p, arch_features(arch, X, data.test.data.rows()), F);

    FlipSeedResult sr;
    sr.seed = seed;
    sr.kappa_G = gram_condition_number(X);
    sr.stability_passed = stability_check(K, cfg.lambda).passed;
    const Matrix I0 = loo_influence_batch(K, Y, cfg.lambda, Kt, Yt);

    Eigen::Index T = data.test.data.n();
    if (cfg.max_test_points > 0) T = std::min(T, cfg.max_test_points);
    std::vector<double> flips(static_cast<std::size_t>(T), NAN), rhos(flips), tops(flips);
    std::vector<char> stable(static_cast<std::size_t>(T), 1);
    parallel_for(std::size_t(T), cfg.threads, [&](std::size_t tt) {
      const auto t = Eigen::Index(tt);
      const Vector orig = I0.col(t);
      const HighInfluenceSet H = select_high_influence(orig, cfg.tau);
      if (H.indices.empty()) return;
      Matrix rows = X.rows();
      for (Eigen::Index i : H.indices) {
        GradientProvider g = network_gradient_provider(p, arch, X, i, LossKind::Squared);
        rows.row(i) = run_attack(g, X.row(i), Y.row(i).transpose(), cfg.attack).transpose();
      }
      const DataMatrix Xp(std::move(rows));
      const Matrix Fp = arch_features(arch, Xp, Xp.rows());
      const Matrix Kp = empirical_ntk(p, Fp).K;
      const Matrix ktp = empirical_ntk_cross(p, arch_features(arch, Xp, data.test.data.rows().row(t)), Fp);
      stable[tt] = stability_check(Kp, cfg.lambda).passed ? 1 : 0;
      const Vector adv = loo_influence(Kp, Y, cfg.lambda, ktp.row(0).transpose(), Yt.row(t).transpose()).scores;
      flips[tt] = flip_rate(orig, adv, H);
      rhos[tt] = spearman(orig, adv).rho;
      tops[tt] = topk_stability(orig, adv, std::min<Eigen::Index>(cfg.topk, orig.size()));
    });
    double fs = 0.0, rs = 0.0, ks = 0.0;
    for (std::size_t t = 0; t < flips.size(); ++t) {
      sr.stability_passed = sr.stability_passed && stable[t];
      if (std::isnan(flips[t])) continue;
      sr.per_test_flip.push_back(flips[t]);
      fs += flips[t];
      rs += rhos[t];
      ks += tops[t];
      ++sr.test_points;
    }
    if (sr.test_points > 0) {
      sr.flip_rate = fs / double(sr.test_points);
      sr.spearman = rs / double(sr.test_points);
      sr.topk = ks / double(sr.test_points);
    }
    res.flip_rate += sr.flip_rate / double(cfg.seeds.size());
    res.spearman += sr.spearman / double(cfg.seeds.size());
    res.topk += sr.topk / double(cfg.seeds.size());
    res.stability_passed = res.stability_passed && sr.stability_passed;
    res.per_seed.push_back(std::move(sr));
  }
  return res;
}

}  // namespace linattn
