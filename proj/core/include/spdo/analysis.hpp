#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spdo/pointset.hpp"
#include "spdo/shape.hpp"
#include "spdo/spectral.hpp"

namespace spdo {

// Result of a Sobolev-norm error evaluation.
struct ErrorReport {
  double s = 0.0;
  double value = 0.0;            // the norm (>= 0)
  int l_max_used = 0;            // truncation degree of the coefficient sums
  double tail_estimate = 0.0;    // heuristic size of the approximant's tail
  std::vector<double> per_degree;  // optional (1+l)^{2s}-weighted squared parts
  std::vector<std::string> notes;

  bool has_decomposition() const { return !per_degree.empty(); }
};

// Spectral coefficients of the kernel expansion sum_j c_j theta(x_j . x):
// per (l,m), theta_hat(l) sum_j c_j Y_{l,m}(x_j).  Needs n = 3 (explicit
// basis); truncated at l_max (-1: full table).
SpectralFunction srbf_spectral_coeffs(const Eigen::VectorXd& c, const ShapeFunction& shape,
                                      const PointSet& X, int l_max);

// Sobolev error || exact - sum_j c_j theta(x_j .) ||_s, computed entirely in
// coefficient space:
//   E^2 = sum_l (1+l)^{2s} [ sum_m |uhat|^2
//                            - 2 theta_hat(l) sum_j c_j sum_m uhat Y(x_j)
//                            + theta_hat(l)^2 omega^{-1} N(n,l) Q_l ],
//   Q_l = sum_{i,j} c_i c_j P_l(n; x_i.x_j),
// so that no explicit harmonics are needed when `exact` is zonal (any n).
// Degrees of `exact` beyond l_max, if any, are added as pure error with a
// note.  with_decomposition stores the per-degree summands.
ErrorReport sobolev_error(const SpectralFunction& exact, const Eigen::VectorXd& c,
                          const ShapeFunction& shape, const PointSet& X, double s, int l_max,
                          bool with_decomposition = false);

// Same value via explicit coefficient differences in the real harmonic basis
// (n = 3 only); cross-checks the path above.
ErrorReport sobolev_error_direct(const SpectralFunction& exact, const Eigen::VectorXd& c,
                                 const ShapeFunction& shape, const PointSet& X, double s,
                                 int l_max);

// One row of a convergence table.
struct ConvergenceRow {
  int N = 0;
  double h = 0.0;
  double error = 0.0;
  double eoc = 0.0;  // NaN on the first row
};

// log(e_prev/e_cur) / log(h_prev/h_cur); requires h strictly decreasing and
// positive errors.
double pairwise_eoc(double h_prev, double e_prev, double h_cur, double e_cur);

// Fill the eoc column (first row NaN); validates monotone h, positive errors.
void fill_eoc(std::vector<ConvergenceRow>& rows);

// Global least-squares slope of log(error) against log(h).
double ls_log_slope(const std::vector<std::pair<double, double>>& h_and_error);

// Max over `trials` random band-limited functions v (degree <= l_max) and all
// centers of |v(x_j) - <v, theta(x_j .)>_native|.  Exact identity for
// band-limited v, so the return value is a roundoff budget.  n = 3.
double verify_reproducing(const ShapeFunction& shape, const PointSet& X, int trials, int l_max,
                          std::uint64_t seed);

// Exterior-potential benchmark on S^2, zonal about the x3-axis (all three
// functions have geometric coefficient decay with ratio 1/4, so the default
// truncation keeps the tail below 1e-16):
//   trace     a_l =  (1/4)^l            closed form (1.0625 - 0.5 t)^{-1/2}
//   solution  d_l = -(l+1) (1/4)^l       closed form (0.25 t - 1)/(1.0625 - 0.5 t)^{3/2}
//   data      b_l = -((l+1)/(2l+1)) (1/4)^l   (= weakly singular symbol applied
//                                              to the solution; also
//                                              (-1/2 + double layer) of the trace)
struct DirichletBenchmark {
  SpectralFunction trace;
  SpectralFunction data;
  SpectralFunction solution;
};

DirichletBenchmark dirichlet_benchmark(int l_max = 40);
double dirichlet_trace_closed(double t);
double dirichlet_solution_closed(double t);

}  // namespace spdo
