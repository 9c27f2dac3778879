#include "spdo/assembly.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spdo/harmonics.hpp"
#include "spdo/legendre.hpp"
#include "spdo/parallel.hpp"
#include "spdo/sphere.hpp"
#include "spdo/warnings.hpp"

namespace spdo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAutoTailTarget = 1e-12;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

TailEstimate truncation_bound(const SpectralSymbol& symbol, const ShapeFunction& shape,
                              int power, int l_max) {
  if (power < 1) throw std::invalid_argument("truncation_bound: power must be >= 1");
  if (l_max < 0) throw std::invalid_argument("truncation_bound: l_max must be >= 0");
  const int n = shape.n();
  const DecayFit fit = shape_decay_fit(shape);

  TailEstimate t;
  t.exponent = (n - 2) + symbol.order - 2.0 * power * fit.tau_hat;
  if (t.exponent >= -1.0) {
    t.divergent = true;
    t.bound = kInf;
    return t;
  }

  const int scan = std::min(std::max(2 * l_max, 1024), 8192);
  const EllipticityScan es = ellipticity_scan(symbol, scan);
  const double csym = std::max(std::abs(es.c1), std::abs(es.c2));
  double cdim = 0.0;
  for (int l = 0; l <= scan; ++l) {
    cdim = std::max(cdim, harmonic_dim_d(n, l) / std::pow(1.0 + l, n - 2));
  }
  t.bound = cdim / surface_area(n) * csym * std::pow(fit.c2, power) *
            std::pow(1.0 + l_max, t.exponent + 1.0) / (-t.exponent - 1.0);
  return t;
}

std::vector<double> system_weights(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                   int power, int l_max) {
  if (l_max < 0 || l_max > shape.table_l_max()) {
    throw std::invalid_argument("system_weights: l_max outside the coefficient table");
  }
  if (power < 1 || power > 8) throw std::invalid_argument("system_weights: power out of range");
  const int n = shape.n();
  const double inv_omega = 1.0 / surface_area(n);
  std::vector<double> w(static_cast<std::size_t>(l_max) + 1, 0.0);
  for (int l = 0; l <= l_max; ++l) {
    if (symbol.in_kernel(l)) continue;
    const double v = symbol.value(l);
    if (!std::isfinite(v)) {
      throw std::runtime_error("system_weights: symbol value at degree " + std::to_string(l) +
                               " is not finite");
    }
    const double ph = shape.coeff(l);
    double php = 1.0;
    for (int k = 0; k < power; ++k) php *= ph;
    w[static_cast<std::size_t>(l)] = inv_omega * harmonic_dim_d(n, l) * v * php;
  }
  return w;
}

Eigen::MatrixXd zonal_kernel_matrix(const PointSet& X, int n, std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("zonal_kernel_matrix: empty weight vector");
  if (X.dim() != n) {
    throw std::invalid_argument("zonal_kernel_matrix: point-set dimension does not match n");
  }
  const int N = X.size();
  const int L = static_cast<int>(weights.size()) - 1;
  const double* w = weights.data();
  Eigen::MatrixXd A(N, N);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    for (std::size_t iu = b; iu < e; ++iu) {
      const int i = static_cast<int>(iu);
      for (int j = i; j < N; ++j) {
        const double t = clamp_abscissa(X.pts.row(i).dot(X.pts.row(j)));
        const double v = legendre_weighted_sum(n, L, t, w);
        A(i, j) = v;
        A(j, i) = v;
      }
    }
  });
  return A;
}

namespace {

int auto_l_max(const SpectralSymbol& symbol, const ShapeFunction& shape, int power,
               const char* caller) {
  const int table = shape.table_l_max();
  const auto w = system_weights(symbol, shape, power, table);
  std::vector<double> diag(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += std::abs(w[i]);
    diag[i] = acc;
  }
  for (int L = 32; L < table; L = std::max(L + 1, (L * 5) / 4)) {
    const TailEstimate t = truncation_bound(symbol, shape, power, L);
    if (t.divergent) break;
    const double d = diag[static_cast<std::size_t>(L)];
    if (d > 0.0 && t.bound <= kAutoTailTarget * d) return L;
  }
  const TailEstimate t = truncation_bound(symbol, shape, power, table);
  const double d = diag.back();
  if (t.divergent || d <= 0.0 || t.bound > kAutoTailTarget * d) {
    warn(std::string(caller) + ": tail target " + fmt(kAutoTailTarget) +
         " of the diagonal is not reachable within the coefficient table; using l_max=" +
         std::to_string(table));
  }
  return table;
}

Eigen::MatrixXd assemble(const SpectralSymbol& symbol, const ShapeFunction& shape,
                         const PointSet& X, int power, int l_max, double tail_rel_tol,
                         AssemblyInfo* info, const char* caller) {
  if (X.dim() != shape.n()) {
    throw std::invalid_argument(std::string(caller) +
                                ": point-set dimension does not match the shape function");
  }
  const int table = shape.table_l_max();
  int L = l_max;
  if (L >= 0) {
    if (L > table) {
      throw std::invalid_argument(std::string(caller) + ": l_max " + std::to_string(L) +
                                  " exceeds the coefficient table (" + std::to_string(table) +
                                  ")");
    }
  } else {
    L = auto_l_max(symbol, shape, power, caller);
  }

  const auto w = system_weights(symbol, shape, power, L);
  double diag = 0.0;
  for (double v : w) diag += std::abs(v);
  const TailEstimate tail = truncation_bound(symbol, shape, power, L);
  const double rel = tail.divergent ? kInf : tail.bound / std::max(diag, 1e-300);
  if (tail.divergent) {
    const std::string msg =
        std::string(caller) + ": series tail does not converge absolutely (envelope exponent " +
        fmt(tail.exponent) +
        " >= -1); this method/operator/shape combination violates the convergence requirement";
    if (std::isinf(tail_rel_tol)) {
      warn(msg + " -- proceeding because the tail tolerance is disabled");
    } else {
      throw std::runtime_error(msg);
    }
  } else if (!(rel <= tail_rel_tol)) {
    throw std::runtime_error(std::string(caller) + ": truncation tail bound " + fmt(tail.bound) +
                             " is " + fmt(rel) + " of the diagonal at l_max " +
                             std::to_string(L) + ", above the tolerance " + fmt(tail_rel_tol));
  }
  if (info) {
    info->l_max = L;
    info->tail_bound = tail.bound;
    info->tail_relative = tail.divergent ? kInf : rel;
    info->tail_divergent = tail.divergent;
  }
  return zonal_kernel_matrix(X, shape.n(), w);
}

// Zero the data on the operator's zero set (the continuous problem requires
// it to vanish there); warn when the dropped part is not numerically nil.
SpectralFunction project_off_zero_set(const SpectralSymbol& symbol, const SpectralFunction& g,
                                      const char* caller) {
  if (g.l_max() < 0 || symbol.kernel_set.empty()) return g;
  double dropped_sq = 0.0;
  bool touches = false;
  for (int l : symbol.kernel_set) {
    if (l <= g.l_max()) {
      touches = true;
      dropped_sq += g.sum_m_sq(l);
    }
  }
  if (!touches) return g;
  const double dropped = std::sqrt(dropped_sq);
  if (dropped > 1e-14 * std::max(sobolev_norm(g, 0.0), 1e-300)) {
    warn(std::string(caller) + ": data has spectral content (norm " + fmt(dropped) +
         ") on the operator's zero set; projected out");
  }
  if (g.is_zonal()) {
    std::vector<double> a(static_cast<std::size_t>(g.l_max()) + 1);
    for (int l = 0; l <= g.l_max(); ++l) {
      a[static_cast<std::size_t>(l)] = symbol.in_kernel(l) ? 0.0 : g.zonal_coeff(l);
    }
    return SpectralFunction::zonal(g.n(), g.axis(), std::move(a));
  }
  std::vector<double> flat = g.flat();
  for (int l : symbol.kernel_set) {
    if (l > g.l_max()) continue;
    for (int m = -l; m <= l; ++m) flat[static_cast<std::size_t>(harmonic_index(l, m))] = 0.0;
  }
  return SpectralFunction::general3(std::move(flat));
}

}  // namespace

Eigen::MatrixXd galerkin_matrix(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                const PointSet& X, int l_max, double tail_rel_tol,
                                AssemblyInfo* info) {
  return assemble(symbol, shape, X, 2, l_max, tail_rel_tol, info, "galerkin_matrix");
}

Eigen::MatrixXd collocation_matrix(const SpectralSymbol& symbol, const ShapeFunction& shape,
                                   const PointSet& X, int l_max, double tail_rel_tol,
                                   AssemblyInfo* info) {
  return assemble(symbol, shape, X, 1, l_max, tail_rel_tol, info, "collocation_matrix");
}

Eigen::VectorXd galerkin_rhs(const SpectralSymbol& symbol, const ShapeFunction& shape,
                             const PointSet& X, const SpectralFunction& g, int l_max) {
  if (X.dim() != shape.n()) {
    throw std::invalid_argument("galerkin_rhs: point-set dimension does not match the shape");
  }
  const int table = shape.table_l_max();
  if (l_max > table) {
    throw std::invalid_argument("galerkin_rhs: l_max exceeds the coefficient table");
  }
  const int N = X.size();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(N);
  if (g.l_max() < 0) return f;
  if (g.n() != shape.n()) {
    throw std::invalid_argument("galerkin_rhs: data dimension does not match the shape");
  }
  const SpectralFunction gp = project_off_zero_set(symbol, g, "galerkin_rhs");
  const int n = shape.n();
  const int L = std::min(l_max < 0 ? table : l_max, gp.l_max());
  if (gp.is_zonal()) {
    std::vector<double> v(static_cast<std::size_t>(L) + 1, 0.0);
    for (int l = 0; l <= L; ++l) {
      v[static_cast<std::size_t>(l)] = shape.coeff(l) * gp.zonal_coeff(l);
    }
    const Eigen::VectorXd p = gp.axis();
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const double t = clamp_abscissa(X.pts.row(static_cast<int>(i)).dot(p));
        f(static_cast<int>(i)) = legendre_weighted_sum(n, L, t, v.data());
      }
    });
  } else {
    if (n != 3) {
      throw std::invalid_argument("galerkin_rhs: non-zonal data needs explicit harmonics (n=3)");
    }
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const Eigen::Vector3d x = X.pts.row(static_cast<int>(i)).transpose();
        const Eigen::VectorXd Y = real_harmonics_n3(L, x);
        double s = 0.0;
        for (int l = 0; l <= L; ++l) {
          double sm = 0.0;
          for (int m = -l; m <= l; ++m) sm += gp.coeff(l, m) * Y(harmonic_index(l, m));
          s += shape.coeff(l) * sm;
        }
        f(static_cast<int>(i)) = s;
      }
    });
  }
  return f;
}

Eigen::VectorXd collocation_rhs(const SpectralSymbol& symbol, const PointSet& X,
                                const SpectralFunction& g) {
  const int N = X.size();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(N);
  if (g.l_max() < 0) return f;
  if (g.n() != X.dim()) {
    throw std::invalid_argument("collocation_rhs: data dimension does not match the point set");
  }
  const SpectralFunction gp = project_off_zero_set(symbol, g, "collocation_rhs");
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      f(static_cast<int>(i)) = gp.eval(X.point(static_cast<int>(i)));
    }
  });
  return f;
}

// ---------------------------------------------------------------------------
// Cholesky

namespace {

struct Factorization {
  Eigen::MatrixXd L;  // lower triangle holds the factor
  double min_pivot = kInf;
  double max_pivot = -kInf;
  int bad_index = -1;
  double bad_value = 0.0;
  bool ok = false;
};

Factorization factorize(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  Factorization F;
  F.L = A;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j > 0) {
      F.L.col(j).segment(j, n - j).noalias() -=
          F.L.block(j, 0, n - j, j) * F.L.row(j).head(j).transpose();
    }
    const double d = F.L(j, j);
    F.min_pivot = std::min(F.min_pivot, d);
    if (!std::isfinite(d) || d <= 0.0) {
      F.bad_index = static_cast<int>(j);
      F.bad_value = d;
      return F;
    }
    F.max_pivot = std::max(F.max_pivot, d);
    const double s = std::sqrt(d);
    F.L(j, j) = s;
    if (j + 1 < n) F.L.col(j).segment(j + 1, n - j - 1) /= s;
  }
  F.ok = true;
  return F;
}

Eigen::VectorXd factor_solve(const Factorization& F, const Eigen::VectorXd& b) {
  Eigen::VectorXd y = F.L.triangularView<Eigen::Lower>().solve(b);
  return F.L.transpose().triangularView<Eigen::Upper>().solve(y);
}

void add_condition_estimate(const Eigen::MatrixXd& A, const Factorization& F, SolveInfo& info) {
  const Eigen::Index n = A.rows();
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  v.normalize();
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd w = A * v;
    const double norm = w.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    v = w / norm;
  }
  const double lmax = v.dot(A * v);
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u(i) = gauss(rng);
  u.normalize();
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd w = factor_solve(F, u);
    const double norm = w.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    u = w / norm;
  }
  const double lmin = u.dot(A * u);
  info.condition = lmin > 0.0 ? lmax / lmin : kInf;
}

// Returns false on pivot breakdown with a description in *error.
bool solve_impl(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                SolveInfo& info, std::string* error) {
  if (A.rows() != A.cols()) throw std::invalid_argument("cholesky_solve: matrix not square");
  if (A.rows() == 0) throw std::invalid_argument("cholesky_solve: empty matrix");
  if (A.rows() != b.size()) {
    throw std::invalid_argument("cholesky_solve: rhs length does not match the matrix");
  }
  const Factorization F = factorize(A);
  info.min_pivot = std::isfinite(F.min_pivot) ? F.min_pivot : 0.0;
  info.max_pivot = F.max_pivot > 0.0 ? F.max_pivot : 0.0;
  if (!F.ok) {
    if (error) {
      *error = "pivot " + std::to_string(F.bad_index) + " is not positive (value " +
               fmt(F.bad_value) + ")";
    }
    return false;
  }
  x = factor_solve(F, b);
  const double bnorm = b.norm();
  Eigen::VectorXd r = b - A * x;
  double rel = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
  if (rel > 1e-13 && bnorm > 0.0) {
    const Eigen::VectorXd x0 = x;
    x += factor_solve(F, r);
    const double rel2 = (b - A * x).norm() / bnorm;
    if (rel2 < rel) {
      rel = rel2;
      info.refinement_steps = 1;
    } else {
      x = x0;
    }
  }
  info.rel_residual = rel;
  add_condition_estimate(A, F, info);
  if (rel > 1e-10 * std::max(1.0, info.condition)) {
    warn("cholesky_solve: relative residual " + fmt(rel) +
         " is larger than expected for condition " + fmt(info.condition));
  }
  return true;
}

}  // namespace

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                               SolveInfo* info) {
  SolveInfo local;
  SolveInfo& out = info ? *info : local;
  Eigen::VectorXd x;
  std::string error;
  if (!solve_impl(A, b, x, out, &error)) {
    throw std::runtime_error(
        "cholesky_solve: " + error +
        "; the matrix is not positive definite (broken assembly or series truncation)");
  }
  return x;
}

bool try_cholesky_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                        SolveInfo* info) {
  SolveInfo local;
  SolveInfo& out = info ? *info : local;
  return solve_impl(A, b, x, out, nullptr);
}

bool is_positive_definite(const Eigen::MatrixXd& A, double* first_bad_pivot) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw std::invalid_argument("is_positive_definite: need a nonempty square matrix");
  }
  const Factorization F = factorize(A);
  if (!F.ok && first_bad_pivot) *first_bad_pivot = F.bad_value;
  return F.ok;
}

// ---------------------------------------------------------------------------
// Constraint functionals and zero-set correction

ConstraintFunctional ConstraintFunctional::mean_value(double target, int n) {
  ConstraintFunctional mu;
  mu.kind = Kind::spectral;
  Eigen::VectorXd axis = Eigen::VectorXd::Zero(n);
  axis(n - 1) = 1.0;
  mu.weight = SpectralFunction::zonal(n, axis, {1.0});
  mu.target = target;
  return mu;
}

ConstraintFunctional ConstraintFunctional::at_point(const Eigen::VectorXd& y, double target) {
  ConstraintFunctional mu;
  mu.kind = Kind::point_eval;
  const double norm = y.norm();
  if (!(norm > 0.0) || std::abs(norm - 1.0) > 1e-6) {
    throw std::invalid_argument("ConstraintFunctional::at_point: point must be a unit vector");
  }
  mu.point = y / norm;
  mu.target = target;
  return mu;
}

double apply_to_srbf(const ConstraintFunctional& mu, const Eigen::VectorXd& c,
                     const ShapeFunction& shape, const PointSet& X, int l_max) {
  if (c.size() != X.size()) {
    throw std::invalid_argument("apply_to_srbf: coefficient length does not match the point set");
  }
  const int table = shape.table_l_max();
  if (l_max > table) throw std::invalid_argument("apply_to_srbf: l_max exceeds the table");
  const int L = l_max < 0 ? table : l_max;
  const int n = shape.n();
  const int N = X.size();
  if (mu.kind == ConstraintFunctional::Kind::point_eval) {
    if (mu.point.size() != n) {
      throw std::invalid_argument("apply_to_srbf: constraint point dimension mismatch");
    }
    std::vector<double> w(static_cast<std::size_t>(L) + 1);
    const double inv_omega = 1.0 / surface_area(n);
    for (int l = 0; l <= L; ++l) {
      w[static_cast<std::size_t>(l)] = inv_omega * harmonic_dim_d(n, l) * shape.coeff(l);
    }
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double t = clamp_abscissa(X.pts.row(j).dot(mu.point));
      s += c(j) * legendre_weighted_sum(n, L, t, w.data());
    }
    return s;
  }
  const SpectralFunction& w = mu.weight;
  if (w.l_max() < 0) return 0.0;
  if (w.n() != n) throw std::invalid_argument("apply_to_srbf: constraint weight dimension mismatch");
  const int Lw = std::min(L, w.l_max());
  if (w.is_zonal()) {
    std::vector<double> v(static_cast<std::size_t>(Lw) + 1);
    for (int l = 0; l <= Lw; ++l) {
      v[static_cast<std::size_t>(l)] = shape.coeff(l) * w.zonal_coeff(l);
    }
    const Eigen::VectorXd p = w.axis();
    double s = 0.0;
    for (int j = 0; j < N; ++j) {
      const double t = clamp_abscissa(X.pts.row(j).dot(p));
      s += c(j) * legendre_weighted_sum(n, Lw, t, v.data());
    }
    return s;
  }
  if (n != 3) {
    throw std::invalid_argument("apply_to_srbf: non-zonal constraint weight needs n = 3");
  }
  double s = 0.0;
  for (int j = 0; j < N; ++j) {
    const Eigen::Vector3d x = X.pts.row(j).transpose();
    const Eigen::VectorXd Y = real_harmonics_n3(Lw, x);
    double sj = 0.0;
    for (int l = 0; l <= Lw; ++l) {
      double sm = 0.0;
      for (int m = -l; m <= l; ++m) sm += w.coeff(l, m) * Y(harmonic_index(l, m));
      sj += shape.coeff(l) * sm;
    }
    s += c(j) * sj;
  }
  return s;
}

double apply_to_harmonic(const ConstraintFunctional& mu, int l, int m) {
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("apply_to_harmonic: bad (l, m)");
  if (mu.kind == ConstraintFunctional::Kind::point_eval) {
    if (mu.point.size() != 3) {
      throw std::invalid_argument("apply_to_harmonic: explicit harmonics need n = 3");
    }
    const Eigen::Vector3d y = mu.point;
    return real_harmonics_n3(l, y)(harmonic_index(l, m));
  }
  const SpectralFunction& w = mu.weight;
  if (w.l_max() < l) return 0.0;
  if (w.n() != 3) {
    throw std::invalid_argument("apply_to_harmonic: explicit harmonics need n = 3");
  }
  if (w.is_zonal()) {
    const Eigen::Vector3d p = w.axis();
    const Eigen::VectorXd Y = real_harmonics_n3(l, p);
    return w.zonal_coeff(l) * surface_area(3) / harmonic_dim_d(3, l) * Y(harmonic_index(l, m));
  }
  return w.coeff(l, m);
}

double apply_to_spectral(const ConstraintFunctional& mu, const SpectralFunction& v) {
  if (mu.kind == ConstraintFunctional::Kind::point_eval) return v.eval(mu.point);
  return inner_s(v, mu.weight, 0.0);
}

KernelCorrection kernel_correction(const std::vector<ConstraintFunctional>& constraints,
                                   const Eigen::VectorXd& c, const SpectralSymbol& symbol,
                                   const ShapeFunction& shape, const PointSet& X, int l_max) {
  const int M = symbol.kernel_dim(X.dim());
  if (static_cast<int>(constraints.size()) != M) {
    throw std::invalid_argument("kernel_correction: operator needs exactly " + std::to_string(M) +
                                " constraints, got " + std::to_string(constraints.size()));
  }
  KernelCorrection out;
  if (M == 0) {
    out.coeffs.resize(0);
    return out;
  }
  if (X.dim() != 3) {
    throw std::invalid_argument("kernel_correction: explicit harmonics are available for n = 3 only");
  }
  for (int l : symbol.kernel_set) {
    for (int m = -l; m <= l; ++m) out.degrees.emplace_back(l, m);
  }
  Eigen::MatrixXd B(M, M);
  Eigen::VectorXd rhs(M);
  for (int i = 0; i < M; ++i) {
    for (int k = 0; k < M; ++k) {
      B(i, k) = apply_to_harmonic(constraints[static_cast<std::size_t>(i)],
                                  out.degrees[static_cast<std::size_t>(k)].first,
                                  out.degrees[static_cast<std::size_t>(k)].second);
    }
    rhs(i) = constraints[static_cast<std::size_t>(i)].target -
             apply_to_srbf(constraints[static_cast<std::size_t>(i)], c, shape, X, l_max);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  if (lu.rank() < M) {
    throw std::runtime_error("kernel_correction: constraint matrix has rank " +
                             std::to_string(lu.rank()) + " < " + std::to_string(M) +
                             "; the functionals do not determine the zero-set component");
  }
  out.coeffs = lu.solve(rhs);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const auto& sv = svd.singularValues();
  out.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : kInf;
  out.max_constraint_residual = (B * out.coeffs - rhs).cwiseAbs().maxCoeff();
  return out;
}

// ---------------------------------------------------------------------------
// Matrix persistence

static_assert(std::endian::native == std::endian::little,
              "matrix files are defined little-endian; this build targets LE hosts");

namespace {

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void save_matrix_binary(const std::string& path, const Eigen::MatrixXd& A) {
  if (A.rows() > static_cast<Eigen::Index>(UINT32_MAX) ||
      A.cols() > static_cast<Eigen::Index>(UINT32_MAX)) {
    throw std::invalid_argument("save_matrix_binary: matrix too large for the header");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_matrix_binary: cannot open " + path);
  out.write("SPDO", 4);
  write_u32(out, 1u);
  write_u32(out, static_cast<std::uint32_t>(A.rows()));
  write_u32(out, static_cast<std::uint32_t>(A.cols()));
  std::vector<double> row(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) row[static_cast<std::size_t>(j)] = A(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("save_matrix_binary: write failed for " + path);
}

Eigen::MatrixXd load_matrix_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_matrix_binary: cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "SPDO") {
    throw std::runtime_error("load_matrix_binary: bad magic in " + path);
  }
  const std::uint32_t version = read_u32(in);
  if (version != 1u) {
    throw std::runtime_error("load_matrix_binary: unsupported version " +
                             std::to_string(version) + " in " + path);
  }
  const std::uint32_t rows = read_u32(in);
  const std::uint32_t cols = read_u32(in);
  if (!in) throw std::runtime_error("load_matrix_binary: truncated header in " + path);
  Eigen::MatrixXd A(rows, cols);
  std::vector<double> row(cols);
  for (std::uint32_t i = 0; i < rows; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw std::runtime_error("load_matrix_binary: truncated data in " + path);
    for (std::uint32_t j = 0; j < cols; ++j) A(i, j) = row[j];
  }
  return A;
}

void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matrix_csv: cannot open " + path);
  char buf[40];
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", A(i, j));
      out << buf << (j + 1 < A.cols() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_matrix_csv: write failed for " + path);
}

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matrix_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    std::vector<double> vals;
    double v;
    while (ss >> v) vals.push_back(v);
    if (!ss.eof()) {
      throw std::runtime_error("load_matrix_csv: line " + std::to_string(lineno) +
                               ": unparsable value in " + path);
    }
    if (vals.empty()) continue;
    if (!rows.empty() && vals.size() != rows.front().size()) {
      throw std::runtime_error("load_matrix_csv: line " + std::to_string(lineno) +
                               ": ragged row in " + path);
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw std::runtime_error("load_matrix_csv: no data in " + path);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) {
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return A;
}

}  // namespace spdo
