#pragma once

#include <vector>

namespace spdo {

// Nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, sum to 2
};

// Gauss-Legendre rule with k nodes: exact for polynomials of degree 2k-1.
QuadratureRule gauss_legendre(int k);

// Node count used for shape-coefficient integrals up to degree l_max:
// max(64, 2*l_max + 16).
int default_node_count(int l_max);

}  // namespace spdo
