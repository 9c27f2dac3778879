#include "spdo/shape.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spdo/legendre.hpp"
#include "spdo/quadrature.hpp"
#include "spdo/sphere.hpp"
#include "spdo/warnings.hpp"

namespace spdo {

namespace {

// Positivity gate shared by every constructor: exact zeros or tiny negative
// quadrature residue (|value| < 1e-15) are clamped to a 1e-300 floor with a
// warning; anything more negative signals a genuinely failed table.
void sanitize_coeffs(std::vector<double>& coeffs, const std::string& context) {
  int clamped = 0;
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    const double v = coeffs[l];
    if (v > 0.0) continue;
    if (v > -1e-15) {
      coeffs[l] = 1e-300;
      ++clamped;
    } else {
      throw std::runtime_error(context + ": coefficient at l=" + std::to_string(l) +
                               " is negative (" + std::to_string(v) +
                               "); table rejected");
    }
  }
  if (clamped > 0) {
    warn(context + ": clamped " + std::to_string(clamped) +
         " nonpositive coefficient(s) to the 1e-300 floor");
  }
}

}  // namespace

double ShapeFunction::closed_form(double t) const {
  if (!closed_form_) throw std::logic_error("ShapeFunction: no closed form attached");
  return closed_form_(t);
}

void ShapeFunction::set_closed_form(std::function<double(double)> f,
                                    std::optional<double> kink) {
  closed_form_ = std::move(f);
  kink_ = kink;
}

ShapeFunction ShapeFunction::from_coeffs(int n, std::vector<double> coeffs, double tau,
                                         std::string name) {
  if (n < 2) throw std::invalid_argument("ShapeFunction: need n >= 2");
  if (coeffs.empty()) throw std::invalid_argument("ShapeFunction: empty table");
  sanitize_coeffs(coeffs, "shape '" + name + "'");
  ShapeFunction s;
  s.n_ = n;
  s.coeffs_ = std::move(coeffs);
  s.tau_ = tau;
  s.name_ = std::move(name);
  return s;
}

namespace {

double wendland_closed_form(double t) {
  const double chord2 = 2.0 - 2.0 * t;
  if (chord2 <= 0.0) return 1.0;
  const double v = 1.0 - std::sqrt(chord2);
  return v > 0.0 ? v * v : 0.0;
}

}  // namespace

ShapeFunction wendland_shape(int n, int table_l_max) {
  if (n < 3) throw std::invalid_argument("wendland_shape: need n >= 3");
  if (table_l_max < 0) throw std::invalid_argument("wendland_shape: need table_l_max >= 0");

  // Panel [-1, 1/2]: the function vanishes there, contributing nothing.
  // Panel [1/2, 1]: substitute r = sqrt(2-2t); then t = 1 - r^2/2,
  //   dt = -r dr, 1-t^2 = (r^2/2)(2 - r^2/2), and
  //   coeff(l) = omega_{n-1} int_0^1 (1-r)^2 P_l(n; 1-r^2/2)
  //              r^{n-2} 2^{-(n-3)/2} (2-r^2/2)^{(n-3)/2} dr,
  // which is smooth in r (polynomial for odd n), so Gauss-Legendre with
  // 2*table_l_max + 16 nodes integrates it exactly to rounding.
  const int k = default_node_count(table_l_max);
  const QuadratureRule rule = gauss_legendre(k);
  std::vector<double> coeffs(static_cast<std::size_t>(table_l_max) + 1, 0.0);
  std::vector<double> pl(static_cast<std::size_t>(table_l_max) + 1);

  const double front = surface_area(n - 1) * std::pow(2.0, -0.5 * (n - 3));
  for (int i = 0; i < k; ++i) {
    const double r = 0.5 * (rule.nodes[static_cast<std::size_t>(i)] + 1.0);  // [0,1]
    const double wr = 0.5 * rule.weights[static_cast<std::size_t>(i)];
    const double t = 1.0 - 0.5 * r * r;
    const double one_minus_r = 1.0 - r;
    const double node_weight = front * wr * one_minus_r * one_minus_r *
                               std::pow(r, n - 2) *
                               std::pow(2.0 - 0.5 * r * r, 0.5 * (n - 3));
    legendre_all(n, table_l_max, t, pl.data());
    for (int l = 0; l <= table_l_max; ++l) {
      coeffs[static_cast<std::size_t>(l)] += node_weight * pl[static_cast<std::size_t>(l)];
    }
  }

  sanitize_coeffs(coeffs, "wendland table");
  ShapeFunction s = ShapeFunction::from_coeffs(n, std::move(coeffs), 1.5, "wendland");
  s.set_closed_form(wendland_closed_form, 0.5);
  if (n != 3 && table_l_max >= 50) {
    s.set_tau(shape_decay_fit(s).tau_hat);
  }
  return s;
}

DecayFit shape_decay_fit(const ShapeFunction& shape, int lo, int hi) {
  const int lmax = shape.table_l_max();
  if (lmax < 50) throw std::invalid_argument("shape_decay_fit: table must reach l >= 50");
  if (lo < 0) lo = lmax / 2;
  if (hi < 0) hi = lmax;
  if (lo < 1 || hi > lmax || hi - lo < 10) {
    throw std::invalid_argument("shape_decay_fit: bad fit window");
  }

  // least squares for log c - 2 tau log(1+l)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = hi - lo + 1;
  for (int l = lo; l <= hi; ++l) {
    const double x = std::log(1.0 + l);
    const double y = std::log(shape.coeff(l));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  DecayFit fit;
  fit.tau_hat = -0.5 * slope;
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (int l = 1; l <= lmax; ++l) {
    const double r = shape.coeff(l) * std::pow(1.0 + l, 2.0 * fit.tau_hat);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  fit.c1 = rmin;
  fit.c2 = rmax;
  return fit;
}

double kernel_eval_series(const ShapeFunction& shape, double t) {
  const int lmax = shape.table_l_max();
  const double inv_omega = 1.0 / surface_area(shape.n());
  std::vector<double> w(static_cast<std::size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) {
    w[static_cast<std::size_t>(l)] = inv_omega * harmonic_dim_d(shape.n(), l) * shape.coeff(l);
  }
  return legendre_weighted_sum(shape.n(), lmax, t, w.data());
}

double kernel_eval(const ShapeFunction& shape, double t) {
  if (shape.has_closed_form()) return shape.closed_form(clamp_abscissa(t));
  return kernel_eval_series(shape, t);
}

void save_shape_csv(const ShapeFunction& shape, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_shape_csv: cannot open " + path);
  out << "# shape coefficient table\n";
  out << "# name=" << shape.name() << " n=" << shape.n();
  char buf[64];
  std::snprintf(buf, sizeof buf, " tau=%.17g", shape.tau());
  out << buf;
  if (shape.has_kink()) {
    std::snprintf(buf, sizeof buf, " kink=%.17g", shape.kink());
    out << buf;
  }
  out << "\nl,coefficient\n";
  for (int l = 0; l <= shape.table_l_max(); ++l) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", l, shape.coeff(l));
    out << buf;
  }
  if (!out) throw std::runtime_error("save_shape_csv: write failed for " + path);
}

ShapeFunction load_shape_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_shape_csv: cannot open " + path);
  int n = 3;
  double tau = 0.0;
  std::string name = "custom";
  std::vector<double> coeffs;
  std::string line;
  int expected_l = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        if (tok.rfind("name=", 0) == 0) name = tok.substr(5);
        else if (tok.rfind("n=", 0) == 0) n = std::stoi(tok.substr(2));
        else if (tok.rfind("tau=", 0) == 0) tau = std::stod(tok.substr(4));
      }
      continue;
    }
    if (line.rfind("l,", 0) == 0) continue;  // column header
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("load_shape_csv: malformed row '" + line + "'");
    }
    const int l = std::stoi(line.substr(0, comma));
    if (l != expected_l) {
      throw std::runtime_error("load_shape_csv: rows must be consecutive degrees; got l=" +
                               std::to_string(l) + " expected " + std::to_string(expected_l));
    }
    coeffs.push_back(std::stod(line.substr(comma + 1)));
    ++expected_l;
  }
  ShapeFunction s = ShapeFunction::from_coeffs(n, std::move(coeffs), tau, name);
  if (s.name() == "wendland") s.set_closed_form(wendland_closed_form, 0.5);
  return s;
}

}  // namespace spdo
