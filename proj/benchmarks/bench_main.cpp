#include <benchmark/benchmark.h>

#include "linattn/attention.hpp"
#include "linattn/dataset.hpp"
#include "linattn/influence.hpp"
#include "linattn/ntk.hpp"
#include "linattn/train.hpp"

using namespace linattn;

namespace {

void BM_AttentionKernel(benchmark::State& state) {
  DataMatrix X = generate_sphere_data(state.range(0), 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(attention_kernel(X).K.data());
}
BENCHMARK(BM_AttentionKernel)->RangeMultiplier(2)->Range(16, 256);

void BM_AttentionKernelBruteforce(benchmark::State& state) {
  DataMatrix X = generate_sphere_data(state.range(0), 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(attention_kernel_bruteforce(X).K.data());
}
BENCHMARK(BM_AttentionKernelBruteforce)->RangeMultiplier(2)->Range(16, 64);

void BM_EmpiricalNtk(benchmark::State& state) {
  DataMatrix X = generate_sphere_data(64, 128, 2);
  NetworkParams p = init_network(state.range(0), 128, 0.01, 3);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_ntk(p, X.rows()).K.data());
}
BENCHMARK(BM_EmpiricalNtk)->RangeMultiplier(4)->Range(64, 4096);

Matrix psd(Eigen::Index n) {
  DataMatrix X = generate_sphere_data(n, n + 8, 4);
  return gram(X).K;
}

void BM_LooInfluence(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix K = psd(n);
  const Matrix Y = Matrix::Ones(n, 1);
  const Vector kt = K.col(0), yt = Vector::Ones(1);
  for (auto _ : state) benchmark::DoNotOptimize(loo_influence(K, Y, 1e-2, kt, yt).scores.data());
}
BENCHMARK(BM_LooInfluence)->RangeMultiplier(2)->Range(16, 256);

// the same scores by solving every leave-one-out system
void BM_LooRefit(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const Matrix K = psd(n);
  const Vector y = Vector::Ones(n), kt = K.col(0);
  for (auto _ : state) {
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) keep.push_back(j);
      Matrix A = K(keep, keep);
      A.diagonal().array() += 1e-2;
      const double f = kt(keep).dot(A.ldlt().solve(y(keep))) - 1.0;
      out(i) = 0.5 * f * f;
    }
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_LooRefit)->RangeMultiplier(2)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();
