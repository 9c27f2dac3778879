#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include "spdo/pointset.hpp"

using namespace spdo;
constexpr double kPi = std::numbers::pi;

TEST_SUITE_BEGIN("pointsets");

TEST_CASE("make_point_set normalizes near-unit rows and rejects bad ones") {
  Eigen::MatrixXd raw(3, 3);
  raw << 1.0 + 5e-7, 0, 0,
         0, 1, 0,
         0, 0, -1;
  const PointSet X = make_point_set(raw);
  CHECK(X.size() == 3);
  CHECK(X.dim() == 3);
  for (int i = 0; i < 3; ++i) CHECK(X.pts.row(i).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(X.point(0).x() == 1.0);

  Eigen::MatrixXd far(2, 3);
  far << 1.1, 0, 0, 0, 1, 0;
  CHECK_THROWS_WITH_AS((void)make_point_set(far),
                       doctest::Contains("row 1"), std::invalid_argument);

  Eigen::MatrixXd dup(3, 3);
  dup << 0, 0, 1,
         1, 0, 0,
         0, 0, 1;
  try {
    (void)make_point_set(dup);
    FAIL("duplicate rows must be rejected");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("1") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }
}

TEST_CASE("spiral lattice: determinism, unit rows, quasi-uniformity") {
  const PointSet A = fibonacci_points(101);
  const PointSet B = fibonacci_points(101);
  CHECK(A.pts == B.pts);  // bit-for-bit deterministic
  CHECK(A.size() == 101);
  CHECK(A.dim() == 3);
  for (int i = 0; i < A.size(); ++i) {
    CHECK(A.pts.row(i).norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS((void)fibonacci_points(1), std::invalid_argument);

  // h sqrt(N) is nearly constant for the spiral
  for (int N : {40, 101, 400}) {
    const double h = mesh_norm(fibonacci_points(N), 5);
    const double scaled = h * std::sqrt(static_cast<double>(N));
    CHECK(scaled > 2.2);
    CHECK(scaled < 3.3);
  }
}

TEST_CASE("point files: comments, validation, line numbers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "spdo_pointset_io_test";
  fs::create_directories(dir);

  const std::string good = (dir / "good.txt").string();
  std::FILE* f = std::fopen(good.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("# a comment\n\n1 0 0\n0 1 0\n  0 0 1  # trailing note\n", f);
  std::fclose(f);
  const PointSet X = load_points(good);
  CHECK(X.size() == 3);
  CHECK(X.point(2).z() == 1.0);

  const std::string bad = (dir / "bad.txt").string();
  f = std::fopen(bad.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("1 0 0\n0 2 0\n", f);
  std::fclose(f);
  CHECK_THROWS_WITH_AS((void)load_points(bad), doctest::Contains("line 2"), std::runtime_error);

  const std::string ragged = (dir / "ragged.txt").string();
  f = std::fopen(ragged.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("1 0 0\n0 1\n", f);
  std::fclose(f);
  CHECK_THROWS_AS((void)load_points(ragged), std::runtime_error);

  CHECK_THROWS_AS((void)load_points((dir / "absent.txt").string()), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("separation radius has exact landmarks") {
  Eigen::MatrixXd raw(3, 3);
  raw << 1, 0, 0,
         0, 1, 0,
         -1, 0, 0;
  const PointSet X = make_point_set(raw);
  // closest pair is at geodesic distance pi/2, so q = pi/4
  CHECK(separation_radius(X) == doctest::Approx(kPi / 4.0).epsilon(1e-14));

  Eigen::MatrixXd two(2, 3);
  two << 0, 0, 1, 0, 0, -1;
  CHECK(separation_radius(make_point_set(two)) == doctest::Approx(kPi / 2.0).epsilon(1e-14));

  Eigen::MatrixXd one(1, 3);
  one << 0, 0, 1;
  CHECK_THROWS_AS((void)separation_radius(make_point_set(one)), std::invalid_argument);
}

TEST_CASE("mesh norm has exact landmarks") {
  Eigen::MatrixXd one(1, 3);
  one << 0, 0, 1;
  // a single point: the farthest location is the antipode
  CHECK(mesh_norm(make_point_set(one), 5) == doctest::Approx(kPi).epsilon(1e-6));

  Eigen::MatrixXd two(2, 3);
  two << 0, 0, 1, 0, 0, -1;
  // poles: the equator sits at distance pi/2 from both
  CHECK(mesh_norm(make_point_set(two), 5) == doctest::Approx(kPi / 2.0).epsilon(1e-6));

  Eigen::MatrixXd oct(6, 3);
  oct << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
  // octahedron: face centers maximize the distance, at acos(1/sqrt 3)
  CHECK(mesh_norm(make_point_set(oct), 5) ==
        doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-6));

  CHECK_THROWS_AS((void)mesh_norm(make_point_set(one), -1), std::invalid_argument);
  CHECK_THROWS_AS((void)mesh_norm(make_point_set(one), 9), std::invalid_argument);

  Eigen::MatrixXd four(1, 4);
  four << 0, 0, 0, 1;
  CHECK_THROWS_AS((void)mesh_norm(make_point_set(four)), std::invalid_argument);
}

TEST_CASE("characterize reports a consistent mesh ratio") {
  const PointSet X = fibonacci_points(101);
  const SetGeometry g = characterize(X, 5);
  CHECK(g.h == doctest::Approx(mesh_norm(X, 5)).epsilon(1e-12));
  CHECK(g.q == doctest::Approx(separation_radius(X)).epsilon(1e-12));
  CHECK(g.rho == doctest::Approx(g.h / g.q).epsilon(1e-12));
  CHECK(g.rho > 1.0);   // h >= q always
  CHECK(g.rho < 4.0);   // the spiral is quasi-uniform
}

TEST_CASE("geometry estimates are rotation and permutation invariant") {
  const PointSet X = fibonacci_points(60);
  std::mt19937_64 rng(1616);
  std::normal_distribution<double> G;
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M(i, j) = G(rng);
  }
  const Eigen::Matrix3d Q = Eigen::HouseholderQR<Eigen::Matrix3d>(M).householderQ();
  PointSet rotated = make_point_set(X.pts * Q.transpose());
  CHECK(separation_radius(rotated) == doctest::Approx(separation_radius(X)).epsilon(1e-9));
  CHECK(mesh_norm(rotated, 4) == doctest::Approx(mesh_norm(X, 4)).epsilon(1e-5));

  Eigen::MatrixXd shuffled = X.pts;
  shuffled.row(0).swap(shuffled.row(59));
  shuffled.row(7).swap(shuffled.row(23));
  const PointSet P = make_point_set(shuffled);
  CHECK(separation_radius(P) == doctest::Approx(separation_radius(X)).epsilon(1e-14));
  CHECK(mesh_norm(P, 4) == doctest::Approx(mesh_norm(X, 4)).epsilon(1e-12));
}

TEST_CASE("inserting a point never increases the mesh norm") {
  std::mt19937_64 rng(1717);
  std::normal_distribution<double> G;
  for (int trial = 0; trial < 5; ++trial) {
    const PointSet X = fibonacci_points(30 + 7 * trial);
    const double before = mesh_norm(X, 4);
    Eigen::Vector3d y(G(rng), G(rng), G(rng));
    y.normalize();
    Eigen::MatrixXd aug(X.size() + 1, 3);
    aug.topRows(X.size()) = X.pts;
    aug.row(X.size()) = y.transpose();
    const double after = mesh_norm(make_point_set(aug), 4);
    CHECK(after <= before + 1e-9);
  }
}

TEST_SUITE_END();
