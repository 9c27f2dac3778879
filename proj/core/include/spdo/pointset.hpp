#pragma once

#include <string>

#include <Eigen/Dense>

namespace spdo {

// A finite set of unit vectors on S^{n-1}, one per row.
struct PointSet {
  Eigen::MatrixXd pts;  // N x n, unit rows

  int size() const { return static_cast<int>(pts.rows()); }
  int dim() const { return static_cast<int>(pts.cols()); }
  Eigen::VectorXd point(int i) const { return pts.row(i).transpose(); }
};

// Validate raw rows: each must be within 1e-6 of unit length (then it is
// normalized exactly) and no two may coincide within geodesic distance
// 1e-10.  Throws with row numbers otherwise.
PointSet make_point_set(Eigen::MatrixXd raw);

// Golden-angle spiral lattice on S^2: N >= 2 quasi-uniform points,
//   z_i = 1 - (2i+1)/N,  azimuth_i = i * pi (3 - sqrt 5).
PointSet fibonacci_points(int N);

// Whitespace-separated coordinates, one point per line; '#' starts a
// comment; blank lines ignored.  The ambient dimension is taken from the
// first data row.  Validation as in make_point_set, with 1-based line
// numbers in error messages.
PointSet load_points(const std::string& path);

// Separation radius q_X = (1/2) min_{i != j} geodesic(x_i, x_j); exact
// O(N^2) scan.  Needs N >= 2.
double separation_radius(const PointSet& X);

// Mesh norm h_X = sup_y min_j geodesic(y, x_j) on S^2, estimated by an
// icosphere candidate scan at the given refinement level (level 6: ~41k
// candidates) followed by a local pattern-search polish of the best
// candidates.  The candidate grid makes this a lower bound whose defect is
// at most the grid spacing; the polish drives the remaining slack well
// below 1e-3 radians for quasi-uniform sets.
double mesh_norm(const PointSet& X, int refinement = 6);

// h, q and the mesh ratio rho = h/q in one call.
struct SetGeometry {
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;
};
SetGeometry characterize(const PointSet& X, int refinement = 6);

}  // namespace spdo
