#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spdo/harmonics.hpp"
#include "spdo/legendre.hpp"
#include "spdo/quadrature.hpp"
#include "spdo/sphere.hpp"

using namespace spdo;
constexpr double kPi = std::numbers::pi;

TEST_SUITE_BEGIN("sphcore");

TEST_CASE("surface areas match the closed forms") {
  CHECK(surface_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
  CHECK(surface_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-15));
  CHECK(surface_area(4) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK(surface_area(6) == doctest::Approx(kPi * kPi * kPi).epsilon(1e-14));
  for (int n = 2; n <= 10; ++n) CHECK(surface_area(n) > 0.0);
}

TEST_CASE("harmonic dimensions match the product-formula oracle") {
  for (int n = 3; n <= 6; ++n) {
    for (int l = 0; l <= 12; ++l) {
      CHECK(static_cast<double>(harmonic_dim(n, l)) == oracle::dim_product(n, l));
      CHECK(harmonic_dim_d(n, l) == doctest::Approx(oracle::dim_product(n, l)).epsilon(1e-15));
    }
  }
  // pins
  for (int l = 0; l <= 10; ++l) CHECK(harmonic_dim(3, l) == 2 * l + 1);
  CHECK(harmonic_dim(4, 2) == 9);
  CHECK(harmonic_dim(5, 0) == 1);
  CHECK(harmonic_dim(7, 1) == 7);
}

TEST_CASE("normalized Legendre values match the hypergeometric oracle") {
  for (int n : {3, 4, 5}) {
    std::vector<double> P(13);
    for (int i = 0; i <= 20; ++i) {
      const double t = -1.0 + 2.0 * i / 20.0;
      legendre_all(n, 12, t, P.data());
      for (int l = 0; l <= 12; ++l) {
        // the terminating series cancels strongly near t = -1 (terms reach
        // ~1e7 at l = 12), so the oracle itself is only good to ~1e-9 there
        CHECK(P[static_cast<std::size_t>(l)] ==
              doctest::Approx(oracle::legendre_hyp(n, l, t)).epsilon(3e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("Legendre endpoint, bound, and recurrence properties") {
  std::vector<double> P(51);
  for (int n : {3, 4, 5, 7}) {
    legendre_all(n, 50, 1.0, P.data());
    for (double v : P) CHECK(v == 1.0);  // integer-exact at t = 1
  }
  for (int n : {3, 4}) {
    for (int i = 0; i <= 100; ++i) {
      const double t = -1.0 + 2.0 * i / 100.0;
      legendre_all(n, 30, t, P.data());
      for (int l = 0; l <= 30; ++l) CHECK(std::abs(P[static_cast<std::size_t>(l)]) <= 1.0 + 1e-14);
    }
  }
  // three-term recurrence residual at random abscissae
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n : {3, 4, 6}) {
    for (int trial = 0; trial < 25; ++trial) {
      const double t = U(rng);
      legendre_all(n, 20, t, P.data());
      for (int l = 1; l < 20; ++l) {
        const double res = (l + n - 2) * P[static_cast<std::size_t>(l + 1)] -
                           (2 * l + n - 2) * t * P[static_cast<std::size_t>(l)] +
                           l * P[static_cast<std::size_t>(l - 1)];
        CHECK(std::abs(res) <= 1e-13);
      }
    }
  }
}

TEST_CASE("legendre_eval and the fused weighted sum agree with legendre_all") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::normal_distribution<double> G;
  std::vector<double> P(201), w(201);
  for (double& v : w) v = G(rng);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = U(rng);
    legendre_all(3, 200, t, P.data());
    double naive = 0.0;
    for (int l = 0; l <= 200; ++l) naive += w[static_cast<std::size_t>(l)] * P[static_cast<std::size_t>(l)];
    CHECK(legendre_weighted_sum(3, 200, t, w.data()) ==
          doctest::Approx(naive).epsilon(1e-12).scale(1.0));
    CHECK(legendre_eval(3, 17, t) == P[17]);
  }
}

TEST_CASE("legendre_table tabulates values at the requested abscissae") {
  const std::vector<double> ts = {-1.0, -0.3, 0.2, 0.999, 1.0};
  const LegendreTable table = legendre_table(3, 8, ts);
  CHECK(table.n == 3);
  CHECK(table.l_max == 8);
  REQUIRE(table.values.rows() == 5);
  REQUIRE(table.values.cols() == 9);
  std::vector<double> P(9);
  for (int i = 0; i < 5; ++i) {
    legendre_all(3, 8, ts[static_cast<std::size_t>(i)], P.data());
    for (int l = 0; l <= 8; ++l) CHECK(table.values(i, l) == P[static_cast<std::size_t>(l)]);
  }
}

TEST_CASE("clamp_abscissa forgives roundoff and rejects junk") {
  CHECK(clamp_abscissa(1.0 + 1e-13) == 1.0);
  CHECK(clamp_abscissa(-1.0 - 1e-13) == -1.0);
  CHECK(clamp_abscissa(0.25) == 0.25);
  CHECK_THROWS_AS((void)clamp_abscissa(1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS((void)clamp_abscissa(-1.1), std::domain_error);
  CHECK_THROWS_AS((void)clamp_abscissa(std::nan("")), std::domain_error);
}

TEST_CASE("Gauss rules integrate monomials exactly and are symmetric") {
  for (int k : {1, 2, 5, 16, 64}) {
    const QuadratureRule q = gauss_legendre(k);
    REQUIRE(q.nodes.size() == static_cast<std::size_t>(k));
    double wsum = 0.0;
    for (double w : q.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int m = 0; m < 2 * k; ++m) {
      double val = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) val += q.weights[i] * std::pow(q.nodes[i], m);
      const double exact = (m % 2 == 0) ? 2.0 / (m + 1) : 0.0;
      CHECK(val == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
    for (int i = 0; i < k / 2; ++i) {
      CHECK(q.nodes[static_cast<std::size_t>(i)] ==
            doctest::Approx(-q.nodes[static_cast<std::size_t>(k - 1 - i)]).epsilon(1e-14).scale(1.0));
    }
  }
  CHECK(default_node_count(400) == 816);
  CHECK(default_node_count(0) == 64);
  CHECK(default_node_count(5) == 64);
  CHECK(default_node_count(800) == 1616);
}

TEST_CASE("real harmonics: addition formula against the Legendre oracle") {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> G;
  auto unit = [&] {
    Eigen::Vector3d v(G(rng), G(rng), G(rng));
    return Eigen::Vector3d(v.normalized());
  };
  const double omega = surface_area(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Vector3d x = unit(), y = unit();
    const Eigen::VectorXd Yx = real_harmonics_n3(10, x);
    const Eigen::VectorXd Yy = real_harmonics_n3(10, y);
    for (int l = 0; l <= 10; ++l) {
      double sum = 0.0;
      for (int m = -l; m <= l; ++m) sum += Yx[harmonic_index(l, m)] * Yy[harmonic_index(l, m)];
      const double expected =
          (2.0 * l + 1.0) / omega * oracle::legendre_hyp(3, l, x.dot(y));
      // tolerance limited by the oracle's cancellation at negative dots
      CHECK(sum == doctest::Approx(expected).epsilon(2e-9).scale(1.0));
    }
  }
}

TEST_CASE("real harmonics are orthonormal under the product-rule oracle") {
  const oracle::SphereRule rule = oracle::sphere_rule(16, 32);
  const int L = 6;
  const int dim = (L + 1) * (L + 1);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const Eigen::VectorXd Y = real_harmonics_n3(L, rule.x[i]);
    G += rule.w[i] * Y * Y.transpose();
  }
  const double dev = (G - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  CHECK(dev <= 1e-10);
}

TEST_CASE("degree 0 and 1 harmonics take their closed-form values") {
  const double y00 = 1.0 / std::sqrt(4.0 * kPi);
  const double c1 = std::sqrt(3.0 / (4.0 * kPi));
  std::mt19937_64 rng(404);
  std::normal_distribution<double> G;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::Vector3d x(G(rng), G(rng), G(rng));
    x.normalize();
    const Eigen::VectorXd Y = real_harmonics_n3(1, x);
    CHECK(Y[harmonic_index(0, 0)] == doctest::Approx(y00).epsilon(1e-15));
    // the degree-1 block spans the coordinates: its squared sum is c1^2
    const double s2 = Y.segment(1, 3).squaredNorm();
    CHECK(s2 == doctest::Approx(c1 * c1).epsilon(1e-13));
    CHECK(Y[harmonic_index(1, 0)] == doctest::Approx(c1 * x.z()).epsilon(1e-13).scale(1.0));
  }
  CHECK(harmonic_index(0, 0) == 0);
  CHECK(harmonic_index(1, -1) == 1);
  CHECK(harmonic_index(1, 0) == 2);
  CHECK(harmonic_index(1, 1) == 3);
  CHECK(harmonic_index(2, 2) == 8);
}

TEST_SUITE_END();
