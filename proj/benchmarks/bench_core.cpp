#include <benchmark/benchmark.h>

#include <random>

#include "spdo/analysis.hpp"
#include "spdo/assembly.hpp"
#include "spdo/legendre.hpp"
#include "spdo/pointset.hpp"
#include "spdo/shape.hpp"
#include "spdo/symbol.hpp"

namespace {

const spdo::ShapeFunction& shared_shape() {
  static const spdo::ShapeFunction shape = spdo::wendland_shape(3, 400);
  return shape;
}

void BM_galerkin_assembly(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const spdo::PointSet X = spdo::fibonacci_points(N);
  const spdo::SpectralSymbol sym = spdo::weakly_singular_symbol();
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::galerkin_matrix(sym, shared_shape(), X, 400));
  }
  state.SetComplexityN(N);
}
BENCHMARK(BM_galerkin_assembly)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_collocation_assembly(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const spdo::PointSet X = spdo::fibonacci_points(N);
  const spdo::SpectralSymbol sym = spdo::weakly_singular_symbol();
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::collocation_matrix(sym, shared_shape(), X, 400));
  }
}
BENCHMARK(BM_collocation_assembly)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_legendre_weighted_sum(benchmark::State& state) {
  const std::vector<double> w = spdo::system_weights(spdo::weakly_singular_symbol(),
                                                     shared_shape(), 2, 400);
  double t = -0.999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::legendre_weighted_sum(3, 400, t, w.data()));
    t += 1e-4;
    if (t > 0.999) t = -0.999;
  }
}
BENCHMARK(BM_legendre_weighted_sum);

void BM_mesh_norm(benchmark::State& state) {
  const spdo::PointSet X = spdo::fibonacci_points(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::mesh_norm(X, 5));
  }
}
BENCHMARK(BM_mesh_norm)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_cholesky(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd B(N, N);
  for (int i = 0; i < B.size(); ++i) B.data()[i] = g(rng);
  const Eigen::MatrixXd A =
      B * B.transpose() + static_cast<double>(N) * Eigen::MatrixXd::Identity(N, N);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::cholesky_solve(A, b));
  }
}
BENCHMARK(BM_cholesky)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_sobolev_error(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const spdo::PointSet X = spdo::fibonacci_points(N);
  const spdo::SpectralFunction exact = spdo::dirichlet_benchmark(40).solution;
  Eigen::VectorXd c = Eigen::VectorXd::Constant(N, 1.0 / N);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdo::sobolev_error(exact, c, shared_shape(), X, -0.5, 400));
  }
}
BENCHMARK(BM_sobolev_error)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
