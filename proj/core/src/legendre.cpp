#include "spdo/legendre.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spdo {

double clamp_abscissa(double t) {
  if (std::isnan(t) || t < -1.0 - 1e-12 || t > 1.0 + 1e-12) {
    throw std::domain_error("legendre: abscissa " + std::to_string(t) +
                            " outside [-1, 1]");
  }
  if (t > 1.0) return 1.0;
  if (t < -1.0) return -1.0;
  return t;
}

namespace {

void check_family(int n, int l_max) {
  if (n < 2) throw std::invalid_argument("legendre: need n >= 2");
  if (l_max < 0) throw std::invalid_argument("legendre: need l_max >= 0");
}

}  // namespace

void legendre_all(int n, int l_max, double t, double* out) {
  check_family(n, l_max);
  t = clamp_abscissa(t);
  out[0] = 1.0;
  if (l_max == 0) return;
  out[1] = t;
  for (int l = 1; l < l_max; ++l) {
    // all integer factors below 2^53: the division is exact at t = 1
    out[l + 1] = ((2.0 * l + n - 2.0) * t * out[l] - l * out[l - 1]) / (l + n - 2.0);
  }
}

std::vector<double> legendre_all(int n, int l_max, double t) {
  std::vector<double> out(static_cast<std::size_t>(l_max) + 1);
  legendre_all(n, l_max, t, out.data());
  return out;
}

double legendre_eval(int n, int l, double t) {
  check_family(n, l);
  t = clamp_abscissa(t);
  if (l == 0) return 1.0;
  double pm1 = 1.0, p = t;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + n - 2.0) * t * p - k * pm1) / (k + n - 2.0);
    pm1 = p;
    p = next;
  }
  return p;
}

double legendre_weighted_sum(int n, int l_max, double t, const double* w) {
  check_family(n, l_max);
  t = clamp_abscissa(t);
  double acc = w[0];
  if (l_max == 0) return acc;
  double pm1 = 1.0, p = t;
  acc += w[1] * p;
  for (int l = 1; l < l_max; ++l) {
    const double next = ((2.0 * l + n - 2.0) * t * p - l * pm1) / (l + n - 2.0);
    pm1 = p;
    p = next;
    acc += w[l + 1] * p;
  }
  return acc;
}

LegendreTable legendre_table(int n, int l_max, std::span<const double> abscissae) {
  check_family(n, l_max);
  LegendreTable table;
  table.n = n;
  table.l_max = l_max;
  table.abscissae.assign(abscissae.begin(), abscissae.end());
  table.values.resize(static_cast<Eigen::Index>(abscissae.size()), l_max + 1);
  std::vector<double> row(static_cast<std::size_t>(l_max) + 1);
  for (std::size_t i = 0; i < abscissae.size(); ++i) {
    legendre_all(n, l_max, abscissae[i], row.data());
    for (int l = 0; l <= l_max; ++l) table.values(static_cast<Eigen::Index>(i), l) = row[l];
  }
  return table;
}

}  // namespace spdo
