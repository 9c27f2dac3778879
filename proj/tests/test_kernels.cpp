#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spdo/legendre.hpp"
#include "spdo/shape.hpp"
#include "spdo/sphere.hpp"
#include "spdo/warnings.hpp"

using namespace spdo;
constexpr double kPi = std::numbers::pi;

namespace {

const ShapeFunction& shared_shape() {
  static const ShapeFunction shape = wendland_shape(3, 400);
  return shape;
}

// Coefficient integral 2*pi * int_{1/2}^{1} theta(t) P_l(t) dt evaluated
// independently: the substitution t = 1 - r^2/2 turns the integrand into a
// polynomial in r on [0,1], which composite Simpson resolves to roundoff.
double coeff_by_substitution(int l) {
  auto f = [l](double r) {
    const double om = 1.0 - r;
    return om * om * oracle::legendre_hyp(3, l, 1.0 - 0.5 * r * r) * r;
  };
  return 2.0 * kPi * oracle::simpson(f, 0.0, 1.0, 1 << 14);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("lowest coefficient equals pi/6 and the quadrature oracle") {
  const ShapeFunction& shape = shared_shape();
  CHECK(std::abs(shape.coeff(0) - kPi / 6.0) <= 1e-10);
  auto closed = [](double t) {
    const double r = std::sqrt(std::max(0.0, 2.0 - 2.0 * t));
    const double om = 1.0 - r;
    return om > 0.0 ? om * om : 0.0;
  };
  const double direct = 2.0 * kPi * oracle::simpson(closed, 0.5, 1.0, 1 << 21);
  CHECK(shape.coeff(0) == doctest::Approx(direct).epsilon(1e-7));
  CHECK(shape.coeff(0) == doctest::Approx(coeff_by_substitution(0)).epsilon(1e-12));
}

TEST_CASE("higher coefficients match the substitution oracle") {
  const ShapeFunction& shape = shared_shape();
  for (int l : {1, 2, 5, 20}) {
    CHECK(shape.coeff(l) == doctest::Approx(coeff_by_substitution(l)).epsilon(1e-9));
  }
}

TEST_CASE("coefficients are strictly positive over the whole table") {
  const ShapeFunction& shape = shared_shape();
  REQUIRE(shape.table_l_max() == 400);
  for (int l = 0; l <= shape.table_l_max(); ++l) CHECK(shape.coeff(l) > 0.0);
  CHECK(shape.tau() == 1.5);
  CHECK(shape.n() == 3);
  CHECK(shape.name() == "wendland");
  CHECK(shape.has_closed_form());
  REQUIRE(shape.has_kink());
  CHECK(shape.kink() == 0.5);
}

TEST_CASE("decay fit brackets the algebraic rate") {
  const DecayFit fit = shape_decay_fit(shared_shape(), 50, 400);
  CHECK(fit.tau_hat >= 1.35);
  CHECK(fit.tau_hat <= 1.65);
  CHECK(fit.c1 > 0.0);
  CHECK(fit.c2 >= fit.c1);
  // the envelope certificate: c1 (1+l)^{-2 tau} <= coeff <= c2 (1+l)^{-2 tau}
  const ShapeFunction& shape = shared_shape();
  for (int l = 1; l <= 400; ++l) {
    const double env = std::pow(1.0 + l, -2.0 * fit.tau_hat);
    CHECK(shape.coeff(l) >= fit.c1 * env * (1.0 - 1e-12));
    CHECK(shape.coeff(l) <= fit.c2 * env * (1.0 + 1e-12));
  }
}

TEST_CASE("decay fit recovers a synthetic power law exactly") {
  std::vector<double> coeffs(201);
  for (int l = 0; l <= 200; ++l) coeffs[static_cast<std::size_t>(l)] = std::pow(1.0 + l, -3.0);
  const ShapeFunction shape = ShapeFunction::from_coeffs(3, coeffs, 1.5, "powerlaw");
  const DecayFit fit = shape_decay_fit(shape);
  CHECK(fit.tau_hat == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.c1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.c2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form evaluation hits the exact landmarks") {
  const ShapeFunction& shape = shared_shape();
  CHECK(kernel_eval(shape, 1.0) == 1.0);
  CHECK(kernel_eval(shape, 0.5) == 0.0);
  CHECK(kernel_eval(shape, 0.0) == 0.0);
  CHECK(kernel_eval(shape, -1.0) == 0.0);
  const double q = (1.0 - std::sqrt(0.5)) * (1.0 - std::sqrt(0.5));
  CHECK(kernel_eval(shape, 0.75) == doctest::Approx(q).epsilon(1e-15));
  // derivative kink at t = 1/2: second difference blows up across it
  const double h = 1e-5;
  const double inside = kernel_eval(shape, 0.5 + h);
  CHECK(inside == doctest::Approx(h * h).epsilon(2e-2));
}

TEST_CASE("coefficient series reproduces the closed form away from t = 1") {
  const ShapeFunction& shape = shared_shape();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> U(-0.999, 0.9);
  for (int trial = 0; trial < 200; ++trial) {
    const double t = U(rng);
    const double closed = kernel_eval(shape, t);
    const double series = kernel_eval_series(shape, t);
    CHECK(std::abs(series - closed) <= 2e-6);
  }
}

TEST_CASE("series deviation at t = 1 stays inside the tail envelope") {
  const ShapeFunction& shape = shared_shape();
  const DecayFit fit = shape_decay_fit(shape);
  const double omega = surface_area(3);
  double bound = 0.0;
  for (int l = 401; l <= 400 * 200; ++l) {
    bound += (2.0 * l + 1.0) * fit.c2 * std::pow(1.0 + l, -2.0 * fit.tau_hat) / omega;
  }
  const double dev = std::abs(kernel_eval(shape, 1.0) - kernel_eval_series(shape, 1.0));
  CHECK(dev <= 1.5 * bound);
  CHECK(dev > 1e-6);  // the truncation really is visible at the diagonal
}

TEST_CASE("table construction clamps roundoff negatives and rejects real ones") {
  std::vector<std::string> captured;
  {
    WarningCapture capture(captured);
    std::vector<double> coeffs = {1.0, 0.5, -1e-16, 0.1};
    const ShapeFunction shape = ShapeFunction::from_coeffs(3, coeffs, 1.0, "residue");
    CHECK(shape.coeff(2) > 0.0);
    CHECK(shape.coeff(2) <= 1e-250);
  }
  REQUIRE(captured.size() == 1);
  CHECK(captured[0].find("clamped") != std::string::npos);
  std::vector<double> bad = {1.0, -1e-10, 0.1};
  CHECK_THROWS_AS((void)ShapeFunction::from_coeffs(3, bad, 1.0, "bad"), std::runtime_error);
  CHECK_THROWS_AS((void)ShapeFunction::from_coeffs(3, {}, 1.0, "empty"), std::invalid_argument);
  CHECK_THROWS_AS((void)ShapeFunction::from_coeffs(1, {1.0}, 1.0, "dim"), std::invalid_argument);
}

TEST_CASE("CSV persistence round-trips bit-exactly and reattaches closed forms") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "spdo_kernel_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "wendland.csv").string();

  const ShapeFunction shape = wendland_shape(3, 60);
  save_shape_csv(shape, path);
  const ShapeFunction loaded = load_shape_csv(path);
  REQUIRE(loaded.table_l_max() == 60);
  for (int l = 0; l <= 60; ++l) CHECK(loaded.coeff(l) == shape.coeff(l));
  CHECK(loaded.tau() == shape.tau());
  CHECK(loaded.n() == shape.n());
  CHECK(loaded.name() == "wendland");
  CHECK(loaded.has_closed_form());
  CHECK(loaded.closed_form(0.75) == shape.closed_form(0.75));

  const std::string mangled = (dir / "mangled.csv").string();
  std::FILE* f = std::fopen(mangled.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("# name: wendland\n0,0.5\n2,0.25\n", f);  // skips l = 1
  std::fclose(f);
  CHECK_THROWS_AS((void)load_shape_csv(mangled), std::runtime_error);
  CHECK_THROWS_AS((void)load_shape_csv((dir / "absent.csv").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("series evaluation matches a manual Legendre sum") {
  const ShapeFunction shape = wendland_shape(3, 80);
  const double omega = surface_area(3);
  for (double t : {-0.75, -0.2, 0.3, 0.5, 0.95}) {
    std::vector<double> P(81);
    legendre_all(3, 80, t, P.data());
    double manual = 0.0;
    for (int l = 0; l <= 80; ++l) {
      manual += (2.0 * l + 1.0) / omega * shape.coeff(l) * P[static_cast<std::size_t>(l)];
    }
    CHECK(kernel_eval_series(shape, t) == doctest::Approx(manual).epsilon(1e-13).scale(1.0));
  }
}

TEST_SUITE_END();
