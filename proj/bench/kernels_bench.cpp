// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "maenv/kernels.hpp"

namespace k = maenv::kernels;

namespace {

std::vector<double> field(int n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> u(std::size_t(n) * n);
  for (auto& v : u) v = d(rng);
  return u;
}

template <auto Kernel>
void laplacian(benchmark::State& state) {
  const int n = int(state.range(0));
  const std::vector<double> u = field(n);
  std::vector<double> out(u.size());
  for (auto _ : state) {
    Kernel(u, out, n);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(u.size()));
}

template <auto Kernel>
void inf_convolution(benchmark::State& state) {
  const int n = int(state.range(0));
  const std::vector<double> u = field(n);
  std::vector<double> out(u.size());
  for (auto _ : state) {
    Kernel(u, out, n, 50.0);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void psor_sweep(benchmark::State& state) {
  const int n = int(state.range(0));
  const double h = 1.0 / n;
  std::vector<double> source(std::size_t(n) * n), obstacle(source.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      source[std::size_t(i) * n + j] = 2 * std::numbers::pi * h * h * (1.0 + 0.5 * std::cos(2 * std::numbers::pi * i * h));
      obstacle[std::size_t(i) * n + j] = std::sin(2 * std::numbers::pi * j * h);
    }
  const k::PsorData data{source, obstacle, {}};
  std::vector<double> u(source.size(), -1.0);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(u, data, n, 1.8));
  state.SetItemsProcessed(state.iterations() * std::int64_t(u.size()));
}

}  // namespace

BENCHMARK(laplacian<k::serial::laplacian>)->Name("laplacian/serial")->Arg(256)->Arg(1024);
BENCHMARK(laplacian<k::omp::laplacian>)->Name("laplacian/omp")->Arg(256)->Arg(1024);
BENCHMARK(psor_sweep<k::serial::psor_sweep>)->Name("psor_sweep/serial")->Arg(256)->Arg(1024);
BENCHMARK(psor_sweep<k::omp::psor_sweep>)->Name("psor_sweep/omp")->Arg(256)->Arg(1024);
BENCHMARK(inf_convolution<k::serial::inf_convolution>)->Name("inf_convolution/serial")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(inf_convolution<k::omp::inf_convolution>)->Name("inf_convolution/omp")->Arg(32)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
