#pragma once

#include <functional>
#include <string>
#include <vector>

#include "spdo/spectral.hpp"

namespace spdo {

// A pseudodifferential operator on S^{n-1} given by its spherical symbol:
// L acts diagonally on harmonics, (Lv)hat_{l,m} = value(l) vhat_{l,m}.
// `order` stores 2*alpha, twice the operator order.  `kernel_set` is the
// finite set K(L) of degrees with value(l) = 0; dim ker L =
// sum_{l in K} N(n,l).
struct SpectralSymbol {
  std::string name;
  double order = 0.0;  // 2*alpha
  std::function<double(int)> value;
  std::vector<int> kernel_set;  // sorted ascending

  double alpha() const { return 0.5 * order; }
  bool in_kernel(int l) const;
  int kernel_dim(int n) const;  // M
};

// Built-in symbols.  `n` is the ambient dimension where the symbol depends
// on it (the surface Laplacian).
SpectralSymbol weakly_singular_symbol();            // 1/(2l+1), order -1
SpectralSymbol double_layer_symbol();               // -1/(4l+2), order -1 (not elliptic)
SpectralSymbol laplace_beltrami_symbol(int n = 3);  // l(l+n-2), order 2, K={0}
SpectralSymbol hypersingular_symbol();              // l(l+1)/(2l+1), order 1, K={0}
SpectralSymbol identity_symbol();                   // 1, order 0

// Wrap an arbitrary value function.  Zero degrees are located by scanning
// l = 0..scan_l_max; a symbol whose zeros extend into the upper half of the
// scan window is rejected (the kernel is likely infinite, which the solver
// machinery does not support).  This finite scan is a documented limitation:
// zeros beyond scan_l_max are not detected.
SpectralSymbol custom_symbol(std::string name, double order,
                             std::function<double(int)> value, int scan_l_max = 2048);

// Parse a symbol description:
//   "weakly-singular" | "double-layer" | "laplace-beltrami" | "hypersingular"
//   | "identity" | "custom:ORDER:EXPR"
// EXPR is a rational expression in l with +, -, *, /, integer ^, parentheses,
// e.g. "custom:-1:1/(2*l+1)".  Underscores are accepted for hyphens.
SpectralSymbol parse_symbol(const std::string& text, int n = 3);

// Compile EXPR (the grammar above) into an evaluator.
std::function<double(int)> parse_symbol_expression(const std::string& expr);

// Scan value(l) (1+l)^{-order} over l <= l_max outside the kernel set.
struct EllipticityScan {
  double c1 = 0.0;  // min of the scaled symbol
  double c2 = 0.0;  // max
  bool strongly_elliptic = false;  // c1 > 0
};
EllipticityScan ellipticity_scan(const SpectralSymbol& symbol, int l_max);

// Apply the operator: scales each degree by value(l); degrees in K(L) come
// out exactly zero.
SpectralFunction apply(const SpectralSymbol& symbol, const SpectralFunction& v);

// Bilinear form a(w,v) = <Lw, v> = sum_l value(l) sum_m what vhat.
double bilinear_a(const SpectralSymbol& symbol, const SpectralFunction& w,
                  const SpectralFunction& v);

}  // namespace spdo
