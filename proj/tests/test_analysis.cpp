#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spdo/analysis.hpp"
#include "spdo/assembly.hpp"
#include "spdo/harmonics.hpp"
#include "spdo/pointset.hpp"
#include "spdo/shape.hpp"
#include "spdo/spectral.hpp"
#include "spdo/symbol.hpp"

using namespace spdo;
constexpr double kPi = std::numbers::pi;

namespace {

Eigen::VectorXd random_coeffs(std::mt19937_64& rng, int N) {
  std::normal_distribution<double> G;
  Eigen::VectorXd c(N);
  for (int i = 0; i < N; ++i) c[i] = G(rng);
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("analysis");

TEST_CASE("kernel-expansion coefficients match the explicit formula") {
  std::mt19937_64 rng(4040);
  const ShapeFunction shape = wendland_shape(3, 50);
  const PointSet X = fibonacci_points(9);
  const Eigen::VectorXd c = random_coeffs(rng, 9);
  const SpectralFunction w = srbf_spectral_coeffs(c, shape, X, 50);
  REQUIRE(w.l_max() == 50);
  std::vector<Eigen::VectorXd> Y(9);
  for (int j = 0; j < 9; ++j) Y[static_cast<std::size_t>(j)] = real_harmonics_n3(50, X.point(j));
  for (int l : {0, 1, 7, 50}) {
    for (int m = -l; m <= l; ++m) {
      double expect = 0.0;
      for (int j = 0; j < 9; ++j) {
        expect += c[j] * Y[static_cast<std::size_t>(j)][harmonic_index(l, m)];
      }
      expect *= shape.coeff(l);
      CHECK(w.coeff(l, m) == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
    }
  }
  // evaluation agrees with summing kernel translates directly
  std::normal_distribution<double> G;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Vector3d x(G(rng), G(rng), G(rng));
    x.normalize();
    double direct = 0.0;
    for (int j = 0; j < 9; ++j) direct += c[j] * kernel_eval_series(shape, x.dot(X.point(j)));
    CHECK(w.eval(x) == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("zonal-path and explicit-basis error evaluations coincide") {
  std::mt19937_64 rng(4141);
  const ShapeFunction shape = wendland_shape(3, 60);
  const PointSet X = fibonacci_points(12);
  const Eigen::VectorXd c = 0.1 * random_coeffs(rng, 12);
  const DirichletBenchmark bench = dirichlet_benchmark(25);
  for (double s : {-0.5, 0.0, 1.0}) {
    const ErrorReport fast = sobolev_error(bench.solution, c, shape, X, s, 60);
    const ErrorReport direct = sobolev_error_direct(bench.solution, c, shape, X, s, 60);
    CHECK(fast.value == doctest::Approx(direct.value).epsilon(1e-12));
    CHECK(fast.s == s);
    CHECK(fast.l_max_used == 60);
  }
}

TEST_CASE("error evaluation edge cases") {
  const ShapeFunction shape = wendland_shape(3, 50);
  const PointSet X = fibonacci_points(8);
  const DirichletBenchmark bench = dirichlet_benchmark(20);

  // zero expansion: the error is the norm of the exact function
  const ErrorReport e0 =
      sobolev_error(bench.solution, Eigen::VectorXd::Zero(8), shape, X, -0.5, 50);
  CHECK(e0.value == doctest::Approx(sobolev_norm(bench.solution, -0.5)).epsilon(1e-13));

  // reproducing a pure kernel expansion: zero distance to itself
  std::mt19937_64 rng(4242);
  const Eigen::VectorXd c = random_coeffs(rng, 8);
  const SpectralFunction self = srbf_spectral_coeffs(c, shape, X, 50);
  const ErrorReport es = sobolev_error(self, c, shape, X, 0.0, 50);
  // the squared norm cancels in coefficient space, so sqrt leaves ~1e-8
  CHECK(es.value <= 1e-7 * sobolev_norm(self, 0.0));

  // the decomposition sums back to the squared norm
  const ErrorReport ed = sobolev_error(bench.solution, c, shape, X, -0.5, 50, true);
  REQUIRE(ed.has_decomposition());
  REQUIRE(ed.per_degree.size() == 51);
  double total = 0.0;
  for (double v : ed.per_degree) total += v;
  CHECK(total == doctest::Approx(ed.value * ed.value).epsilon(1e-12));
}

TEST_CASE("order-zero error matches direct surface quadrature") {
  std::mt19937_64 rng(4343);
  std::normal_distribution<double> G;
  const ShapeFunction shape = wendland_shape(3, 50);
  const PointSet X = fibonacci_points(6);
  const Eigen::VectorXd c = 0.3 * random_coeffs(rng, 6);
  std::vector<double> flat(49);
  for (double& v : flat) v = G(rng);
  const SpectralFunction u = SpectralFunction::general3(flat);

  // integrand degree is twice the kernel table length, so the rule must
  // integrate degree 100 exactly
  const oracle::SphereRule rule = oracle::sphere_rule(64, 128);
  const double integral = oracle::sphere_integrate(rule, [&](const Eigen::Vector3d& x) {
    double tilde = 0.0;
    for (int j = 0; j < 6; ++j) {
      tilde += c[j] * kernel_eval_series(shape, x.dot(X.point(j)));
    }
    const double diff = u.eval(x) - tilde;
    return diff * diff;
  });
  const ErrorReport e = sobolev_error(u, c, shape, X, 0.0, 50);
  CHECK(e.value == doctest::Approx(std::sqrt(integral)).epsilon(1e-10));
}

TEST_CASE("pairwise rates and table filling") {
  CHECK(pairwise_eoc(0.65140, 0.120349381, 0.51210, 0.054895875) ==
        doctest::Approx(3.2625).epsilon(0.0035));
  CHECK(pairwise_eoc(0.65140, 0.139479793, 0.51210, 0.047806025) ==
        doctest::Approx(4.4503).epsilon(0.0025));
  // synthetic power law is recovered exactly
  const double h1 = 0.5, h2 = 0.3;
  CHECK(pairwise_eoc(h1, std::pow(h1, 3.5), h2, std::pow(h2, 3.5)) ==
        doctest::Approx(3.5).epsilon(1e-12));
  CHECK_THROWS_AS((void)pairwise_eoc(0.5, 1.0, 0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)pairwise_eoc(0.5, 1.0, 0.7, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((void)pairwise_eoc(0.5, -1.0, 0.3, 0.5), std::invalid_argument);

  std::vector<ConvergenceRow> rows(3);
  rows[0] = {10, 0.8, std::pow(0.8, 2.0), 0.0};
  rows[1] = {20, 0.4, std::pow(0.4, 2.0), 0.0};
  rows[2] = {40, 0.2, std::pow(0.2, 2.0), 0.0};
  fill_eoc(rows);
  CHECK(std::isnan(rows[0].eoc));
  CHECK(rows[1].eoc == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rows[2].eoc == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("least-squares slope recovers an exact power law") {
  std::vector<std::pair<double, double>> data;
  for (double h : {0.9, 0.7, 0.5, 0.3, 0.2}) data.emplace_back(h, 2.7 * std::pow(h, 2.75));
  CHECK(ls_log_slope(data) == doctest::Approx(2.75).epsilon(1e-12));
  CHECK_THROWS_AS((void)ls_log_slope({{0.5, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS((void)ls_log_slope({{0.5, 1.0}, {0.3, -1.0}}), std::invalid_argument);
}

TEST_CASE("band-limited functions are reproduced by their native projections") {
  const ShapeFunction& shape = []() -> const ShapeFunction& {
    static const ShapeFunction s = wendland_shape(3, 400);
    return s;
  }();
  const PointSet X = fibonacci_points(40);
  CHECK(verify_reproducing(shape, X, 20, 10, 1) <= 1e-10);
  // determinism in the seed
  CHECK(verify_reproducing(shape, X, 5, 8, 7) == verify_reproducing(shape, X, 5, 8, 7));
}

TEST_CASE("benchmark coefficients follow the generating formulas") {
  const DirichletBenchmark bench = dirichlet_benchmark(30);
  CHECK(bench.trace.is_zonal());
  CHECK(bench.trace.l_max() == 30);
  double r = 1.0;  // exact powers of 1/4
  for (int l = 0; l <= 30; ++l) {
    CHECK(bench.trace.zonal_coeff(l) == r);
    CHECK(bench.solution.zonal_coeff(l) == -(l + 1.0) * r);
    CHECK(bench.data.zonal_coeff(l) ==
          doctest::Approx(-(l + 1.0) / (2.0 * l + 1.0) * r).epsilon(1e-15));
    r *= 0.25;
  }
  // the data is the operator applied to the solution, degree by degree
  const SpectralSymbol ws = weakly_singular_symbol();
  for (int l = 0; l <= 30; ++l) {
    CHECK(ws.value(l) * bench.solution.zonal_coeff(l) ==
          doctest::Approx(bench.data.zonal_coeff(l)).epsilon(1e-15));
  }
}

TEST_CASE("benchmark closed forms match their series") {
  const DirichletBenchmark bench = dirichlet_benchmark(60);
  CHECK(dirichlet_trace_closed(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(dirichlet_solution_closed(1.0) == doctest::Approx(-16.0 / 9.0).epsilon(1e-15));

  std::mt19937_64 rng(4444);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Eigen::Vector3d pole(0, 0, 1);
  auto series_at = [&](const SpectralFunction& v, double t) {
    // zonal about the x3 axis: evaluate at a point with x.axis = t
    const Eigen::Vector3d x(std::sqrt(std::max(0.0, 1.0 - t * t)), 0.0, t);
    return v.eval(x);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const double t = U(rng);
    CHECK(series_at(bench.trace, t) ==
          doctest::Approx(dirichlet_trace_closed(t)).epsilon(1e-12));
    CHECK(series_at(bench.solution, t) ==
          doctest::Approx(dirichlet_solution_closed(t)).epsilon(1e-12));
  }
  for (double t : {-1.0, 1.0}) {
    CHECK(series_at(bench.trace, t) ==
          doctest::Approx(dirichlet_trace_closed(t)).epsilon(1e-12));
    CHECK(series_at(bench.solution, t) ==
          doctest::Approx(dirichlet_solution_closed(t)).epsilon(1e-12));
  }
}

TEST_CASE("benchmark solution coefficients match quadrature against harmonics") {
  // uhat_{l,0} of a zonal function about the pole is d_l sqrt(4 pi / (2l+1));
  // verify by integrating u Y_{l,0} over the sphere.
  const DirichletBenchmark bench = dirichlet_benchmark(40);
  const oracle::SphereRule rule = oracle::sphere_rule(64, 128);
  for (int l = 0; l <= 8; ++l) {
    const double integral = oracle::sphere_integrate(rule, [&](const Eigen::Vector3d& x) {
      return bench.solution.eval(x) * real_harmonics_n3(8, x)[harmonic_index(l, 0)];
    });
    const double expect =
        bench.solution.zonal_coeff(l) * std::sqrt(4.0 * kPi / (2.0 * l + 1.0));
    CHECK(integral == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
  }
}

TEST_SUITE_END();
