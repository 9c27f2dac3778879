#include "spdo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spdo/harmonics.hpp"
#include "spdo/legendre.hpp"
#include "spdo/parallel.hpp"
#include "spdo/sphere.hpp"

namespace spdo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

int resolve_l_max(const ShapeFunction& shape, int l_max, const char* caller) {
  const int table = shape.table_l_max();
  if (l_max > table) {
    throw std::invalid_argument(std::string(caller) + ": l_max exceeds the coefficient table");
  }
  return l_max < 0 ? table : l_max;
}

// Heuristic size of || approximant ||_s beyond degree L: envelope
// c2^2 (1+l)^{-4 tau_hat} for theta_hat^2, N(n,l) <= cdim (1+l)^{n-2}, and
// Q_l ~ sum c_i^2 (Legendre factors decorrelate off the diagonal).
double approximant_tail(const ShapeFunction& shape, const Eigen::VectorXd& c, double s, int L,
                        std::vector<std::string>& notes) {
  const int n = shape.n();
  const DecayFit fit = shape_decay_fit(shape);
  const double e = 2.0 * s + (n - 2) - 4.0 * fit.tau_hat;
  if (e >= -1.0) {
    notes.push_back("tail estimate unavailable: norm index too high for the coefficient decay");
    return kInf;
  }
  double cdim = 0.0;
  for (int l = 0; l <= 512; ++l) {
    cdim = std::max(cdim, harmonic_dim_d(n, l) / std::pow(1.0 + l, n - 2));
  }
  const double csq = c.squaredNorm();
  const double tail_sq = cdim / surface_area(n) * fit.c2 * fit.c2 * csq *
                         std::pow(1.0 + L, e + 1.0) / (-e - 1.0);
  return std::sqrt(std::max(0.0, tail_sq));
}

void finish_report(ErrorReport& report, double sum_sq) {
  report.value = std::sqrt(std::max(0.0, sum_sq));
  if (std::isfinite(report.tail_estimate) && report.value > 0.0 &&
      report.tail_estimate > 1e-2 * report.value) {
    report.notes.push_back("series tail beyond l_max may be visible at this error level");
  }
}

}  // namespace

SpectralFunction srbf_spectral_coeffs(const Eigen::VectorXd& c, const ShapeFunction& shape,
                                      const PointSet& X, int l_max) {
  if (shape.n() != 3 || X.dim() != 3) {
    throw std::invalid_argument("srbf_spectral_coeffs: explicit harmonics need n = 3");
  }
  if (c.size() != X.size()) {
    throw std::invalid_argument("srbf_spectral_coeffs: coefficient length does not match X");
  }
  const int L = resolve_l_max(shape, l_max, "srbf_spectral_coeffs");
  std::vector<double> flat(static_cast<std::size_t>(L + 1) * (L + 1), 0.0);
  for (int j = 0; j < X.size(); ++j) {
    const Eigen::Vector3d x = X.pts.row(j).transpose();
    const Eigen::VectorXd Y = real_harmonics_n3(L, x);
    const double cj = c(j);
    for (std::size_t k = 0; k < flat.size(); ++k) flat[k] += cj * Y(static_cast<Eigen::Index>(k));
  }
  for (int l = 0; l <= L; ++l) {
    const double ph = shape.coeff(l);
    for (int m = -l; m <= l; ++m) flat[static_cast<std::size_t>(harmonic_index(l, m))] *= ph;
  }
  return SpectralFunction::general3(std::move(flat));
}

ErrorReport sobolev_error(const SpectralFunction& exact, const Eigen::VectorXd& c,
                          const ShapeFunction& shape, const PointSet& X, double s, int l_max,
                          bool with_decomposition) {
  const int n = shape.n();
  if (X.dim() != n) throw std::invalid_argument("sobolev_error: point-set dimension mismatch");
  if (c.size() != X.size()) {
    throw std::invalid_argument("sobolev_error: coefficient length does not match X");
  }
  if (exact.l_max() >= 0 && exact.n() != n) {
    throw std::invalid_argument("sobolev_error: exact-function dimension mismatch");
  }
  const int L = resolve_l_max(shape, l_max, "sobolev_error");
  const int N = X.size();
  const int Lx = std::min(L, exact.l_max());  // degrees where `exact` contributes

  // Q_l = sum_{i,j} c_i c_j P_l(t_ij): per-row partial sums, reduced in
  // ascending row order so the result is thread-count independent.
  Eigen::MatrixXd R(N, L + 1);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
    std::vector<double> p(static_cast<std::size_t>(L) + 1);
    std::vector<double> acc(static_cast<std::size_t>(L) + 1);
    for (std::size_t iu = b; iu < e; ++iu) {
      const int i = static_cast<int>(iu);
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int j = i + 1; j < N; ++j) {
        const double t = clamp_abscissa(X.pts.row(i).dot(X.pts.row(j)));
        legendre_all(n, L, t, p.data());
        const double cj = c(j);
        for (int l = 0; l <= L; ++l) acc[static_cast<std::size_t>(l)] += cj * p[static_cast<std::size_t>(l)];
      }
      const double ci = c(i);
      for (int l = 0; l <= L; ++l) {
        R(i, l) = ci * ci + 2.0 * ci * acc[static_cast<std::size_t>(l)];
      }
    }
  });
  std::vector<double> Q(static_cast<std::size_t>(L) + 1, 0.0);
  for (int i = 0; i < N; ++i) {
    for (int l = 0; l <= L; ++l) Q[static_cast<std::size_t>(l)] += R(i, l);
  }

  // C_l = sum_j c_j sum_m uhat_{l,m} Y_{l,m}(x_j)
  std::vector<double> C(static_cast<std::size_t>(L) + 1, 0.0);
  if (Lx >= 0) {
    if (exact.is_zonal()) {
      const Eigen::VectorXd p = exact.axis();
      Eigen::MatrixXd Crow(N, Lx + 1);
      parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
        std::vector<double> pl(static_cast<std::size_t>(Lx) + 1);
        for (std::size_t iu = b; iu < e; ++iu) {
          const int i = static_cast<int>(iu);
          const double t = clamp_abscissa(X.pts.row(i).dot(p));
          legendre_all(n, Lx, t, pl.data());
          for (int l = 0; l <= Lx; ++l) Crow(i, l) = c(i) * pl[static_cast<std::size_t>(l)];
        }
      });
      for (int i = 0; i < N; ++i) {
        for (int l = 0; l <= Lx; ++l) C[static_cast<std::size_t>(l)] += Crow(i, l);
      }
      for (int l = 0; l <= Lx; ++l) C[static_cast<std::size_t>(l)] *= exact.zonal_coeff(l);
    } else {
      if (n != 3) {
        throw std::invalid_argument("sobolev_error: non-zonal exact data needs n = 3");
      }
      Eigen::MatrixXd Crow(N, Lx + 1);
      parallel_for(static_cast<std::size_t>(N), [&](std::size_t b, std::size_t e) {
        for (std::size_t iu = b; iu < e; ++iu) {
          const int i = static_cast<int>(iu);
          const Eigen::Vector3d x = X.pts.row(i).transpose();
          const Eigen::VectorXd Y = real_harmonics_n3(Lx, x);
          for (int l = 0; l <= Lx; ++l) {
            double sm = 0.0;
            for (int m = -l; m <= l; ++m) sm += exact.coeff(l, m) * Y(harmonic_index(l, m));
            Crow(i, l) = c(i) * sm;
          }
        }
      });
      for (int i = 0; i < N; ++i) {
        for (int l = 0; l <= Lx; ++l) C[static_cast<std::size_t>(l)] += Crow(i, l);
      }
    }
  }

  ErrorReport report;
  report.s = s;
  report.l_max_used = L;
  const double omega = surface_area(n);
  const int top = std::max(L, exact.l_max());
  if (with_decomposition) report.per_degree.assign(static_cast<std::size_t>(top) + 1, 0.0);
  double sum_sq = 0.0;
  for (int l = 0; l <= top; ++l) {
    double term;
    if (l <= L) {
      const double Sl = l <= Lx ? exact.sum_m_sq(l) : 0.0;
      const double ph = shape.coeff(l);
      term = Sl - 2.0 * ph * C[static_cast<std::size_t>(l)] +
             ph * ph * harmonic_dim_d(n, l) / omega * Q[static_cast<std::size_t>(l)];
    } else {
      term = exact.sum_m_sq(l);  // exact data beyond the truncation: pure error
    }
    const double weighted = std::pow(1.0 + l, 2.0 * s) * term;
    sum_sq += weighted;
    if (with_decomposition) report.per_degree[static_cast<std::size_t>(l)] = weighted;
  }
  if (exact.l_max() > L) {
    report.notes.push_back("exact data extends beyond l_max; those degrees count as pure error");
  }
  report.tail_estimate = approximant_tail(shape, c, s, L, report.notes);
  finish_report(report, sum_sq);
  return report;
}

ErrorReport sobolev_error_direct(const SpectralFunction& exact, const Eigen::VectorXd& c,
                                 const ShapeFunction& shape, const PointSet& X, double s,
                                 int l_max) {
  if (shape.n() != 3 || X.dim() != 3) {
    throw std::invalid_argument("sobolev_error_direct: explicit harmonics need n = 3");
  }
  const int L = resolve_l_max(shape, l_max, "sobolev_error_direct");
  const SpectralFunction w = srbf_spectral_coeffs(c, shape, X, L);
  SpectralFunction eg;
  if (exact.l_max() >= 0) {
    eg = exact.is_zonal() ? exact.to_general3(exact.l_max()) : exact;
  }
  ErrorReport report;
  report.s = s;
  report.l_max_used = L;
  const int top = std::max(L, eg.l_max());
  double sum_sq = 0.0;
  for (int l = 0; l <= top; ++l) {
    double sm = 0.0;
    for (int m = -l; m <= l; ++m) {
      const double a = l <= eg.l_max() ? eg.coeff(l, m) : 0.0;
      const double b = l <= w.l_max() ? w.coeff(l, m) : 0.0;
      sm += (a - b) * (a - b);
    }
    sum_sq += std::pow(1.0 + l, 2.0 * s) * sm;
  }
  if (eg.l_max() > L) {
    report.notes.push_back("exact data extends beyond l_max; those degrees count as pure error");
  }
  report.tail_estimate = approximant_tail(shape, c, s, L, report.notes);
  finish_report(report, sum_sq);
  return report;
}

double pairwise_eoc(double h_prev, double e_prev, double h_cur, double e_cur) {
  if (!(h_prev > 0.0) || !(h_cur > 0.0) || !(h_cur < h_prev)) {
    throw std::invalid_argument("pairwise_eoc: mesh norms must be positive and strictly decreasing");
  }
  if (!(e_prev > 0.0) || !(e_cur > 0.0)) {
    throw std::invalid_argument("pairwise_eoc: errors must be positive");
  }
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

void fill_eoc(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (k == 0) {
      rows[k].eoc = kNaN;
    } else {
      rows[k].eoc = pairwise_eoc(rows[k - 1].h, rows[k - 1].error, rows[k].h, rows[k].error);
    }
  }
}

double ls_log_slope(const std::vector<std::pair<double, double>>& h_and_error) {
  if (h_and_error.size() < 2) {
    throw std::invalid_argument("ls_log_slope: need at least two rows");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [h, e] : h_and_error) {
    if (!(h > 0.0) || !(e > 0.0)) {
      throw std::invalid_argument("ls_log_slope: mesh norms and errors must be positive");
    }
    const double x = std::log(h);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(h_and_error.size());
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) {
    throw std::invalid_argument("ls_log_slope: mesh norms do not vary");
  }
  return (m * sxy - sx * sy) / denom;
}

double verify_reproducing(const ShapeFunction& shape, const PointSet& X, int trials, int l_max,
                          std::uint64_t seed) {
  if (shape.n() != 3 || X.dim() != 3) {
    throw std::invalid_argument("verify_reproducing: explicit harmonics need n = 3");
  }
  if (trials < 1) throw std::invalid_argument("verify_reproducing: need trials >= 1");
  const int L = resolve_l_max(shape, l_max, "verify_reproducing");
  const double omega = surface_area(3);

  std::vector<SpectralFunction> kernels;
  kernels.reserve(static_cast<std::size_t>(X.size()));
  for (int j = 0; j < X.size(); ++j) {
    std::vector<double> a(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l) {
      a[static_cast<std::size_t>(l)] = harmonic_dim_d(3, l) / omega * shape.coeff(l);
    }
    kernels.push_back(SpectralFunction::zonal(3, X.point(j), std::move(a)));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> flat(static_cast<std::size_t>(L + 1) * (L + 1));
    for (double& v : flat) v = gauss(rng);
    const SpectralFunction v = SpectralFunction::general3(std::move(flat));
    for (int j = 0; j < X.size(); ++j) {
      const double lhs = v.eval(X.point(j));
      const double rhs = native_inner(v, kernels[static_cast<std::size_t>(j)], shape);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

DirichletBenchmark dirichlet_benchmark(int l_max) {
  if (l_max < 0) throw std::invalid_argument("dirichlet_benchmark: l_max must be >= 0");
  Eigen::VectorXd axis(3);
  axis << 0.0, 0.0, 1.0;
  std::vector<double> a(static_cast<std::size_t>(l_max) + 1);
  std::vector<double> b(static_cast<std::size_t>(l_max) + 1);
  std::vector<double> d(static_cast<std::size_t>(l_max) + 1);
  double r = 1.0;  // 0.25^l
  for (int l = 0; l <= l_max; ++l) {
    a[static_cast<std::size_t>(l)] = r;
    b[static_cast<std::size_t>(l)] = -(l + 1.0) / (2.0 * l + 1.0) * r;
    d[static_cast<std::size_t>(l)] = -(l + 1.0) * r;
    r *= 0.25;
  }
  DirichletBenchmark bench;
  bench.trace = SpectralFunction::zonal(3, axis, std::move(a));
  bench.data = SpectralFunction::zonal(3, axis, std::move(b));
  bench.solution = SpectralFunction::zonal(3, axis, std::move(d));
  return bench;
}

double dirichlet_trace_closed(double t) { return 1.0 / std::sqrt(1.0625 - 0.5 * t); }

double dirichlet_solution_closed(double t) {
  return (0.25 * t - 1.0) / std::pow(1.0625 - 0.5 * t, 1.5);
}

}  // namespace spdo
