#include <benchmark/benchmark.h>

#include <random>

#include "fracdirac/kernels.hpp"

using namespace fracdirac;

namespace {

std::vector<Complex> random_field(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(n);
  for (auto& z : v) z = {g(gen), g(gen)};
  return v;
}

std::vector<double> random_real(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(gen);
  return v;
}

kernels::CoeffBlock random_block(int radius, unsigned seed) {
  const int side = 2 * radius + 1;
  return {radius, random_field(static_cast<std::size_t>(side) * side, seed)};
}

template <auto Kernel>
void BM_phase_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto psi = random_field(n * n, 1);
  const auto phase = random_real(n * n, 2);
  for (auto _ : state) {
    Kernel(psi, phase, 1.0, 1e-3);
    benchmark::DoNotOptimize(psi.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto Kernel>
void BM_transport(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a1 = random_field(n * n, 1);
  auto a2 = random_field(n * n, 2);
  const auto d = random_real(n * n, 3);
  const auto u = random_field(n * n, 4);
  const auto l = random_field(n * n, 5);
  for (auto _ : state) {
    Kernel(a1, a2, d, u, l);
    benchmark::DoNotOptimize(a1.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

template <auto Kernel>
void BM_convolve(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const auto a = random_block(r, 1);
  const auto b = random_block(r, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(a, b));
}

}  // namespace

BENCHMARK(BM_phase_step<kernels::serial::phase_step>)->Arg(192)->Arg(384);
BENCHMARK(BM_phase_step<kernels::parallel::phase_step>)->Arg(192)->Arg(384);
BENCHMARK(BM_transport<kernels::serial::transport_2x2>)->Arg(192)->Arg(384);
BENCHMARK(BM_transport<kernels::parallel::transport_2x2>)->Arg(192)->Arg(384);
BENCHMARK(BM_convolve<kernels::serial::convolve>)->Arg(8)->Arg(16);
BENCHMARK(BM_convolve<kernels::parallel::convolve>)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
