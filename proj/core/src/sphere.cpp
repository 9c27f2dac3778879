#include "spdo/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spdo {

double surface_area(int n) {
  if (n < 2) throw std::invalid_argument("surface_area: need n >= 2");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double harmonic_dim_d(int n, int l) {
  if (n < 2 || l < 0) throw std::invalid_argument("harmonic_dim: need n >= 2, l >= 0");
  if (l == 0) return 1.0;
  // (2l+n-2)/l * prod_{k=1}^{n-2} (l-1+k)/k  == (2l+n-2)/l * C(l+n-3, n-2)
  double r = (2.0 * l + n - 2.0) / l;
  for (int k = 1; k <= n - 2; ++k) r *= static_cast<double>(l - 1 + k) / k;
  return r;
}

std::int64_t harmonic_dim(int n, int l) {
  const double r = harmonic_dim_d(n, l);
  if (r > 9.0e15) {
    throw std::overflow_error("harmonic_dim: N(" + std::to_string(n) + "," +
                              std::to_string(l) + ") exceeds exact integer range");
  }
  return std::llround(r);
}

}  // namespace spdo
