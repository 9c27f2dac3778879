#include "spdo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdo {

int default_node_count(int l_max) { return std::max(64, 2 * l_max + 16); }

QuadratureRule gauss_legendre(int k) {
  if (k < 1) throw std::invalid_argument("gauss_legendre: need k >= 1");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(k));
  rule.weights.resize(static_cast<std::size_t>(k));
  const int half = (k + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration on P_k from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double pm1 = 1.0, p = x;
      for (int l = 1; l < k; ++l) {
        const double next = ((2.0 * l + 1.0) * x * p - l * pm1) / (l + 1.0);
        pm1 = p;
        p = next;
      }
      dp = k * (pm1 - x * p) / (1.0 - x * x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one extra polish step, then stop
        pm1 = 1.0;
        p = x;
        for (int l = 1; l < k; ++l) {
          const double next = ((2.0 * l + 1.0) * x * p - l * pm1) / (l + 1.0);
          pm1 = p;
          p = next;
        }
        dp = k * (pm1 - x * p) / (1.0 - x * x);
        x -= p / dp;
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // store the pair symmetrically: node i is negative, k-1-i its mirror
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.nodes[static_cast<std::size_t>(k - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(k - 1 - i)] = w;
  }
  if (k % 2 == 1) rule.nodes[static_cast<std::size_t>(k / 2)] = 0.0;
  return rule;
}

}  // namespace spdo
