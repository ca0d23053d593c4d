// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "linattn/attention.hpp"
#include "linattn/dataset.hpp"
#include "linattn/experiments.hpp"
#include "linattn/influence.hpp"
#include "linattn/malleability.hpp"
#include "linattn/ntk.hpp"
#include "linattn/spectral.hpp"
#include "linattn/train.hpp"
#include "oracles.hpp"

using namespace linattn;

namespace {

using Clock = std::chrono::steady_clock;

struct Line {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Matrix random_psd(Eigen::Index n, std::uint64_t seed) {
  Matrix A = oracle::gaussian(n, n + 3, seed);
  return A * A.transpose() / double(n + 3);
}

Line kernel_exactness() {
  const auto t0 = Clock::now();
  double worst = 0.0, worst_oracle = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Eigen::Index n = 1 + Eigen::Index(s % 16), d = 2 + Eigen::Index((s * 7) % 19);
    DataMatrix X = generate_sphere_data(n, d, 1000 + s);
    const Matrix K = attention_kernel(X).K;
    worst = std::max(worst, (K - attention_kernel_bruteforce(X).K).cwiseAbs().maxCoeff());
    worst_oracle = std::max(worst_oracle, (K - oracle::cube_by_loops(X.rows())).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  return {1, "kernel exactness", worst <= 1e-10 && worst_oracle <= 1e-10 && t < 10.0,
          fmt("50 datasets n<=16: max |G^3 - bruteforce| = %.2e, vs test oracle %.2e (tol 1e-10); %.2f s (limit 10 s)",
              worst, worst_oracle, t)};
}

Line spectral_transfer() {
  double worst_ratio = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    DataMatrix X = s % 2 ? generate_sphere_data(8, 16, 2000 + s)
                         : generate_spectrum_data(8, 12, {3, 2.5, 2, 1.5, 1, 0.7, 0.4, 0.1}, 2000 + s);
    const double g = spectral_norm(X.rows() * X.rows().transpose());
    for (int k = 0; k <= 3; ++k)
      worst_ratio = std::max(worst_ratio, verify_spectral_transfer(X, k) / std::pow(g, k + 1));
  }
  return {2, "spectral transfer", worst_ratio <= 1e-9,
          fmt("50 seeds, k=0..3: max residual / ||G||^(k+1) = %.2e (tol 1e-9)", worst_ratio)};
}

Line cubic_conditioning() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Eigen::Index n = 2 + Eigen::Index(s % 31);
    DataMatrix X = s % 2 ? generate_sphere_data(n, 4 * n + Eigen::Index(s % 5), 3000 + s)
                         : generate_spectrum_data(n, n + 2, [&] {
                             std::vector<double> v(static_cast<std::size_t>(n));
                             for (Eigen::Index i = 0; i < n; ++i) v[std::size_t(i)] = std::pow(0.95, double(i));
                             return v;
                           }(), 3000 + s);
    // condition numbers measured directly on G and on the attention kernel
    const double kg = condition_number(spectrum(X.rows() * X.rows().transpose()));
    const double kk = condition_number(spectrum(attention_kernel(X).K));
    worst = std::max(worst, std::abs(kk - kg * kg * kg) / (kg * kg * kg));
    worst = std::max(worst, verify_cubic_conditioning(X).relative_error);
  }
  double worst_stack = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    DataMatrix X = generate_spectrum_data(6, 9, {1.6, 1.4, 1.3, 1.1, 1.0, 0.8}, 3500 + s);
    const Matrix G = X.rows() * X.rows().transpose();
    const double kg = condition_number(spectrum(G));
    for (int k = 1; k <= 3; ++k) {
      ConditioningReport r = verify_cubic_conditioning(X, k);
      // exponent read off the measured ratio
      const double exponent = std::log(r.kappa_Gtilde) / std::log(kg);
      worst_stack = std::max({worst_stack, r.relative_error, std::abs(exponent - (2 * k + 1)) / (2 * k + 1)});
    }
  }
  return {3, "cubic conditioning", worst <= 1e-6 && worst_stack <= 1e-6,
          fmt("200 instances: max |k(G^3)-k(G)^3|/k(G)^3 = %.2e; stacked k=1..3 exponent 2k+1 rel err %.2e (tol 1e-6)",
              worst, worst_stack)};
}

Line ntk_closed_form() {
  const auto t0 = Clock::now();
  double worst_z = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Matrix F = oracle::gaussian(2, 3 + Eigen::Index(s % 4), 4000 + s);
    McKernel mc = mc_ntk(F, 1000000, 4100 + s);
    const double exact = infinite_relu_ntk(F).K(0, 1);
    worst_z = std::max(worst_z, std::abs(mc.kernel.K(0, 1) - exact) / mc.std_error(0, 1));
  }
  std::vector<double> logm, logdev;
  const Matrix F = oracle::unit_rows(oracle::gaussian(10, 8, 4200));
  const Matrix Kinf = infinite_relu_ntk(F).K;
  for (int e = 6; e <= 14; ++e) {
    const Eigen::Index m = Eigen::Index(1) << e;
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      NetworkParams p = init_network(m, 8, 1.0, derive_seed(4300, std::uint64_t(e), s));
      acc += std::log(spectral_norm(empirical_ntk(p, F).K - Kinf));
    }
    logm.push_back(std::log(double(m)));
    logdev.push_back(acc / 20.0);
  }
  const double slope = oracle::slope(logm, logdev);
  const double t = seconds_since(t0);
  return {4, "NTK closed form", worst_z <= 3.0 && std::abs(slope + 0.5) <= 0.1 && t < 300.0,
          fmt("20 pairs, 1e6 MC samples: max |MC - closed form| = %.2f SE (tol 3); deviation slope over m=2^6..2^14 "
              "= %.3f (want -0.5 +- 0.1); %.1f s (limit 300 s)",
              worst_z, slope, t)};
}

Line influence_oracle() {
  double worst = 0.0;
  int cases = 0;
  for (double lambda : {1e-3, 1e-1, 1.0})
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Eigen::Index n = 2 + Eigen::Index(s % 11);
      const Matrix K = random_psd(n, 5000 + s);
      const Vector y = oracle::gaussian(n, 1, 5100 + s).col(0);
      const Vector kt = oracle::gaussian(n, 1, 5200 + s).col(0);
      const double yt = oracle::gaussian(1, 1, 5300 + s)(0, 0);
      const Vector got = loo_influence(K, y, lambda, kt, Vector::Constant(1, yt)).scores;
      worst = std::max(worst, (got - oracle::refit_influence(K, y, lambda, kt, yt)).cwiseAbs().maxCoeff());
      ++cases;
    }
  return {5, "influence oracle", worst <= 1e-8,
          fmt("%d cases (n<=12, lambda in {1e-3,1e-1,1}): max |LOO - explicit refit| = %.2e (tol 1e-8)", cases, worst)};
}

struct ExperimentKernels {
  int checked = 0;
  int passed = 0;
};

Line stability_bounds(const ExperimentKernels& ek) {
  int cond_ok = 0, res_ok = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Eigen::Index n = 3 + Eigen::Index(s % 10);
    const Matrix K = random_psd(n, 6000 + s);
    const double lambda = std::pow(10.0, -3.0 + double(s % 4));
    const StabilityReport r = stability_check(K, lambda);
    Eigen::SelfAdjointEigenSolver<Matrix> es(K);
    if (r.cond_number <= es.eigenvalues().maxCoeff() / lambda + 1.0 + 1e-9) ++cond_ok;
    const Matrix P = random_psd(n, 6100 + s);
    const double frac = 0.05 + 0.9 * double(s % 10) / 10.0;
    const Matrix dK = P * (frac * lambda / spectral_norm(P));
    if (resolvent_bound_check(K, dK, lambda).holds) ++res_ok;
  }
  const bool pass = cond_ok == 100 && res_ok == 100 && ek.checked > 0 && ek.passed == ek.checked;
  return {6, "stability bounds", pass,
          fmt("condition bound %d/100, resolvent bound %d/100; four stability assertions on %d/%d experiment kernels",
              cond_ok, res_ok, ek.passed, ek.checked)};
}

Line sensitivity_bounds() {
  int trials = 0, pred_ok = 0, infl_ok = 0, entry_ok = 0, entries = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    DataMatrix X = generate_sphere_data(10, 6, 7000 + s);
    const Matrix Y = oracle::gaussian(10, 1, 7100 + s);
    const double eps = 0.02 * double(1 + s % 3);
    for (auto kind : {KernelEvaluator::Kind::Attention, KernelEvaluator::Kind::Gram, KernelEvaluator::Kind::ArcCos}) {
      KernelEvaluator k(kind, X);
      const KRRModel m = krr_fit({k.train_kernel(), KernelKind::Gram}, Y, 0.1);
      for (int t = 0; t < 10; ++t) {
        const std::uint64_t seed = derive_seed(7200 + s, std::uint64_t(kind), std::uint64_t(t));
        trials += 1;
        if (prediction_sensitivity_check(m, k, X.row(t), eps, 1, seed).holds) ++pred_ok;
        if (influence_change_check(k, Y, 0.1, t, eps, 1, seed).holds) ++infl_ok;
      }
    }
    // attention: per-entry change of k(x) = X (X^T X)^2 x against ||[G^2]_{:,j}||_1 eps on unit rows
    const Matrix G = X.rows() * X.rows().transpose();
    const Matrix G2 = G * G;
    const Matrix C = X.rows().transpose() * X.rows();
    std::mt19937_64 rng(7300 + s);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 10; ++t) {
      Vector delta(6);
      for (auto& v : delta) v = nd(rng);
      delta *= eps / delta.norm();
      const Vector change = X.rows() * (C * C * delta);
      for (Eigen::Index j = 0; j < 10; ++j, ++entries)
        if (std::abs(change(j)) <= G2.col(j).lpNorm<1>() * eps * (1 + 1e-12)) ++entry_ok;
    }
  }
  const bool pass = pred_ok == trials && infl_ok == trials && entry_ok == entries;
  return {7, "sensitivity bounds", pass,
          fmt("%d perturbations: prediction bound held %d, influence-vector bound held %d; attention per-entry bound "
              "held %d/%d",
              trials, pred_ok, infl_ok, entry_ok, entries)};
}

Line bias_reduction() {
  int aligned_ok = 0, misaligned_ok = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    DataMatrix X = generate_spectrum_data(8, 12, {2.0, 1.2, 1.0, 0.8, 0.6, 0.5, 0.4, 0.3}, 8000 + s);
    const Matrix G = X.rows() * X.rows().transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    const Matrix cube = attention_kernel(X).K, had = polynomial_kernel(X, 3).K;
    const Vector top = es.eigenvectors().col(7), bottom = es.eigenvectors().col(0);
    if (bias_decomposition(cube, top, 0.1) <= bias_decomposition(had, top, 0.1)) ++aligned_ok;
    if (bias_decomposition(cube, bottom, 0.1) <= bias_decomposition(had, bottom, 0.1)) ++misaligned_ok;
  }
  return {8, "bias reduction", aligned_ok == 20,
          fmt("aligned targets: Bias^2(G^3) <= Bias^2(G.^3) on %d/20; misaligned (recorded only): holds on %d/20",
              aligned_ok, misaligned_ok)};
}

Line fig1_trend(ExperimentKernels& ek) {
  const auto t0 = Clock::now();
  const Fig1Config cfg = desk_fig1_config();
  const Fig1Result r = run_fig1(cfg);
  const double t = seconds_since(t0);
  const double kr = *std::max_element(r.relu.kappa_G.begin(), r.relu.kappa_G.end());
  const double ka = *std::min_element(r.attn.kappa_G.begin(), r.attn.kappa_G.end());
  // the kernel predictors of the sweep
  for (const SyntheticSpec* spec : {&cfg.relu_data, &cfg.attn_data}) {
    const Arch arch = spec == &cfg.relu_data ? Arch::Relu2L : Arch::MlpAttn;
    for (std::uint64_t seed : cfg.seeds) {
      const SyntheticSplit d = make_synthetic(*spec, seed);
      const Matrix F = arch_features(arch, d.train.data, d.train.data.rows());
      ++ek.checked;
      if (stability_check(infinite_relu_ntk(F).K, double(d.train.data.n()) * cfg.lambda).passed) ++ek.passed;
    }
  }
  const bool pass = r.relu.trend <= -0.5 && r.attn.trend >= 0.0 && kr <= 2.0 && ka >= 50.0 && t < 900.0;
  return {9, "desk-scale NTK distance trend", pass,
          fmt("relu2l trend %.3f (want <= -0.5, kappa(G) <= %.2f); mlp_attn trend %.3f (want >= 0, kappa(G) >= %.0f); "
              "%zu seeds; %.1f s (limit 900 s)",
              r.relu.trend, kr, r.attn.trend, ka, cfg.seeds.size(), t)};
}

void count_flip_kernels(const FlipResult& r, ExperimentKernels& ek) {
  for (const auto& s : r.per_seed) {
    ++ek.checked;
    if (s.stability_passed) ++ek.passed;
  }
}

Line flip_ratio(const FlipResult& relu, const FlipResult& attn) {
  const double ratio = attn.flip_rate / relu.flip_rate;
  return {10, "desk-scale flip-rate ratio", ratio > 2.0,
          fmt("PGD eps=0.3: flip relu2l %.3f, mlp_attn %.3f, ratio %.2f (want > 2; reference 28.9/3.3)",
              relu.flip_rate, attn.flip_rate, ratio)};
}

Line adversarial_direction(const FlipResult& standard, const FlipResult& adv) {
  return {11, "adversarial training raises relu2l flip rate", adv.flip_rate > standard.flip_rate,
          fmt("relu2l flip: standard %.3f, adversarially trained %.3f (want strictly larger; reference 3.3 -> 43.4)",
              standard.flip_rate, adv.flip_rate)};
}

Line metric_cases() {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const char* what) {
    if (!ok) bad.push_back(what);
  };
  Vector I = Vector::LinSpaced(10, 1, 10);
  HighInfluenceSet H;
  for (Eigen::Index i = 0; i < 10; ++i) H.indices.push_back(i);
  Vector three = I;
  three(1) = -1;
  three(5) = -1;
  three(8) = -1;
  check(flip_rate(I, I, H) == 0.0, "flip 0");
  check(flip_rate(I, -I, H) == 1.0, "flip 1");
  check(flip_rate(I, three, H) == 0.3, "flip 0.3");
  Vector a(5), b(3), c(3);
  a << 1, 2, 3, 4, 5;
  b << 1, 2, 3;
  c << 1, 3, 2;
  check(spearman(a, a).rho == 1.0, "spearman 1");
  check(spearman(a, -a).rho == -1.0, "spearman -1");
  check(spearman(b, c).rho == 0.5, "spearman 0.5");
  Vector s = Vector::LinSpaced(10, 10, 1);
  Vector t = s;
  t(0) = -1;
  t(1) = -2;
  check(topk_stability(s, s, 5) == 1.0, "topk 1");
  check(topk_stability(s, -s, 5) == 0.0, "topk 0");
  check(topk_stability(s, t, 5) == 0.6, "topk 0.6");
  std::string which;
  for (const auto& w : bad) which += " " + w;
  return {12, "metric cases", bad.empty(),
          bad.empty() ? std::string("flip {0,1,0.3}, Spearman {1,-1,0.5}, top-K {1,0,0.6} exact")
                      : "mismatch:" + which};
}

}  // namespace

int main() {
  std::vector<Line> lines;
  ExperimentKernels ek;
  lines.push_back(kernel_exactness());
  lines.push_back(spectral_transfer());
  lines.push_back(cubic_conditioning());
  lines.push_back(ntk_closed_form());
  lines.push_back(influence_oracle());
  lines.push_back(sensitivity_bounds());
  lines.push_back(bias_reduction());
  lines.push_back(fig1_trend(ek));

  const FlipConfig fc = desk_flip_config();
  const FlipResult relu = run_flip_experiment(fc, Arch::Relu2L, false);
  const FlipResult attn = run_flip_experiment(fc, Arch::MlpAttn, false);
  const FlipResult relu_adv = run_flip_experiment(fc, Arch::Relu2L, true);
  for (const FlipResult* r : {&relu, &attn, &relu_adv}) count_flip_kernels(*r, ek);
  lines.push_back(flip_ratio(relu, attn));
  lines.push_back(adversarial_direction(relu, relu_adv));
  lines.push_back(stability_bounds(ek));
  lines.push_back(metric_cases());

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int failed = 0;
  for (const Line& l : lines) {
    std::printf("%s AC%-2d %s: %s\n", l.pass ? "PASS" : "FAIL", l.id, l.name.c_str(), l.detail.c_str());
    if (!l.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", int(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
