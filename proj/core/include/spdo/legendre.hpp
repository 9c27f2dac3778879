#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spdo {

// Validate an abscissa for the Legendre family: values within 1e-12 outside
// [-1,1] are clamped (dot products of unit vectors can stray by roundoff),
// anything further out throws.
double clamp_abscissa(double t);

// Normalized Legendre / Gegenbauer family on S^{n-1} (n >= 2), pinned to
// P_l(n; 1) = 1:
//   P_0 = 1,  P_1 = t,
//   (l+n-2) P_{l+1}(n;t) = (2l+n-2) t P_l(n;t) - l P_{l-1}(n;t).
// For n = 3 this is the classical Legendre polynomial.

// Fill out[0..l_max] with P_l(n; t).
void legendre_all(int n, int l_max, double t, double* out);
std::vector<double> legendre_all(int n, int l_max, double t);

double legendre_eval(int n, int l, double t);

// sum_{l=0}^{l_max} w[l] * P_l(n;t), accumulated in increasing l with O(1)
// storage.  This is the fused kernel used by matrix assembly and error sums;
// the fixed accumulation order keeps results independent of threading.
double legendre_weighted_sum(int n, int l_max, double t, const double* w);

// Tabulated values P_l(n; t_i) for a fixed list of abscissae, one row per
// abscissa, one column per degree.
struct LegendreTable {
  int n = 3;
  int l_max = 0;
  std::vector<double> abscissae;
  Eigen::MatrixXd values;  // abscissae.size() x (l_max+1)
};

LegendreTable legendre_table(int n, int l_max, std::span<const double> abscissae);

}  // namespace spdo
