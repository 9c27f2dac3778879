#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spdo/pointset.hpp"
#include "spdo/shape.hpp"
#include "spdo/spectral.hpp"
#include "spdo/symbol.hpp"

namespace spdo {

// ---------------------------------------------------------------------------
// Truncation control
//
// Matrix entries are truncations of the series
//   sum_l omega_n^{-1} N(n,l) Lhat(l) theta_hat(l)^p P_l(n; x_i.x_j)
// (p = 2 for the weighted method, p = 1 for the pointwise method).  The
// neglected tail is bounded with |P_l| <= 1 and the fitted envelopes
//   |Lhat(l)| <= C_sym (1+l)^{order},   theta_hat(l) <= c2 (1+l)^{-2 tau_hat},
// which gives a summand envelope (1+l)^e with e = (n-2) + order - 2 p tau_hat
// and the integral bound (1+l_max)^{e+1} / (-e-1) for e < -1.  For e >= -1
// the series is not absolutely convergent and `divergent` is set (bound inf).
struct TailEstimate {
  double bound = 0.0;     // upper bound on the absolute tail; inf if divergent
  double exponent = 0.0;  // e above
  bool divergent = false;
};

TailEstimate truncation_bound(const SpectralSymbol& symbol, const ShapeFunction& shape,
                              int power, int l_max);

// Per-degree assembly weights w[l] = omega_n^{-1} N(n,l) value(l) theta_hat(l)^power,
// with w = 0 exactly on the symbol's zero set.  Length l_max+1.
std::vector<double> system_weights(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                   int power, int l_max);

// Low-level kernel: A_ij = sum_l weights[l] P_l(n; x_i.x_j), computed for
// i <= j by one fused recurrence pass per entry and mirrored (bit-exact
// symmetry).  No positivity or truncation checks — the high-level assembly
// functions add those; probes use this entry point to build deliberately
// broken systems.
Eigen::MatrixXd zonal_kernel_matrix(const PointSet& X, int n, std::span<const double> weights);

// Diagnostics recorded by the assembly functions.
struct AssemblyInfo {
  int l_max = 0;
  double tail_bound = 0.0;     // absolute tail bound at l_max
  double tail_relative = 0.0;  // bound relative to the (all-equal) diagonal
  bool tail_divergent = false;
};

// Weighted-method matrix  A_ij = sum_{l<=l_max, l off-kernel}
//   omega_n^{-1} N(n,l) Lhat(l) theta_hat(l)^2 P_l(n; x_i.x_j).
//
// l_max = -1 selects the smallest degree whose tail bound is below
// 1e-12 x (estimated diagonal), capped at the coefficient table (with a
// warning when the cap binds).  Throws if the tail bound exceeds
// tail_rel_tol x diagonal, or if the tail is divergent; pass
// tail_rel_tol = infinity to downgrade both to warnings.
Eigen::MatrixXd galerkin_matrix(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                const PointSet& X, int l_max = -1,
                                double tail_rel_tol = 1e-4, AssemblyInfo* info = nullptr);

// Pointwise-method matrix: same with theta_hat(l)^1.
Eigen::MatrixXd collocation_matrix(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                   const PointSet& X, int l_max = -1,
                                   double tail_rel_tol = 1e-4, AssemblyInfo* info = nullptr);

// Weighted-method right-hand side  f_i = <g, Phi_i> restricted off the
// symbol's zero set:  f_i = sum_{l off-kernel} theta_hat(l) sum_m ghat_{l,m}
// Y_{l,m}(x_i).  Zonal g uses the Legendre fast path about its axis; general
// data needs n = 3.  Data with spectral content on the zero set is projected
// out with a warning (the continuous problem requires it to vanish there).
// The sum runs to min(l_max, g.l_max()); l_max = -1 means the full table.
Eigen::VectorXd galerkin_rhs(const SpectralSymbol& symbol, const ShapeFunction& shape,
                             const PointSet& X, const SpectralFunction& g, int l_max = -1);

// Pointwise right-hand side f_j = g(x_j), after the same projection.
Eigen::VectorXd collocation_rhs(const SpectralSymbol& symbol, const PointSet& X,
                                const SpectralFunction& g);

// ---------------------------------------------------------------------------
// Dense symmetric positive-definite solve
//
// Unpivoted Cholesky with explicit pivot tracking: breakdown names the first
// non-positive pivot instead of silently regularizing (a failure here means
// the assembly or truncation is wrong, and must surface).  The condition
// number is estimated by power iteration on A and inverse iteration through
// the factorization.  One step of iterative refinement is applied when the
// initial residual warrants it.
struct SolveInfo {
  double min_pivot = 0.0;      // smallest diagonal of D = diag(L)^2
  double max_pivot = 0.0;
  double condition = 0.0;      // lambda_max / lambda_min estimate
  double rel_residual = 0.0;   // |Ax-b| / |b| after refinement
  int refinement_steps = 0;
};

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                               SolveInfo* info = nullptr);

// Non-throwing variant: returns false on pivot breakdown (info still reports
// the offending pivot).  Used by probes that expect failure.
bool try_cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        Eigen::VectorXd& x, SolveInfo* info = nullptr);

// Factorization-only positive-definiteness check.
bool is_positive_definite(const Eigen::MatrixXd& A, double* first_bad_pivot = nullptr);

// ---------------------------------------------------------------------------
// Zero-set correction
//
// Operators with a nontrivial zero set K determine the solution only up to
// harmonics of those degrees; M = dim of that space constraints pin the rest:
//   sum_k beta_k <mu_i, Y_k> = gamma_i - <mu_i, u1>,   i = 1..M.
// Explicit harmonics are required, so M > 0 needs n = 3.

struct ConstraintFunctional {
  enum class Kind { spectral, point_eval };
  Kind kind = Kind::spectral;
  SpectralFunction weight;  // spectral:  mu(u) = <u, weight>_{L^2}
  Eigen::VectorXd point;    // point_eval: mu(u) = u(point)
  double target = 0.0;      // gamma

  // mu(u) = integral of u over the sphere (weight = the constant 1).
  static ConstraintFunctional mean_value(double target = 0.0, int n = 3);
  static ConstraintFunctional at_point(const Eigen::VectorXd& y, double target = 0.0);
};

// mu applied to the kernel expansion sum_j c_j theta(x_j . x), truncated at l_max.
double apply_to_srbf(const ConstraintFunctional& mu, const Eigen::VectorXd& c,
                     const ShapeFunction& shape, const PointSet& X, int l_max);
// mu applied to the real harmonic Y_{l,m} (n = 3).
double apply_to_harmonic(const ConstraintFunctional& mu, int l, int m);
// mu applied to a spectral function (used for targets and residual checks).
double apply_to_spectral(const ConstraintFunctional& mu, const SpectralFunction& v);

struct KernelCorrection {
  std::vector<std::pair<int, int>> degrees;  // (l, m) labels, flat order
  Eigen::VectorXd coeffs;                    // beta, one per label
  double condition = 0.0;                    // constraint matrix sigma_max/sigma_min
  double max_constraint_residual = 0.0;      // max_i |mu_i(u1 + u0) - gamma_i|
};

// Solves the M x M constraint system.  Requires exactly M = dim-of-zero-set
// constraints; throws on a rank-deficient constraint matrix (the functionals
// do not determine the zero-set component).
KernelCorrection kernel_correction(const std::vector<ConstraintFunctional>& constraints,
                                   const Eigen::VectorXd& c, const SpectralSymbol& symbol,
                                   const ShapeFunction& shape, const PointSet& X, int l_max);

// ---------------------------------------------------------------------------
// Matrix persistence
//
// Flat binary: 16-byte header (magic "SPDO", u32 version = 1, u32 rows,
// u32 cols, little-endian) followed by row-major float64 data.  CSV: one row
// per line, 17 significant digits (round-trips bit-exactly).
void save_matrix_binary(const std::string& path, const Eigen::MatrixXd& A);
Eigen::MatrixXd load_matrix_binary(const std::string& path);
void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& A);
Eigen::MatrixXd load_matrix_csv(const std::string& path);

}  // namespace spdo
