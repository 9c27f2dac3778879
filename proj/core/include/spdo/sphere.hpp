#pragma once

#include <cstdint>

namespace spdo {

// Surface area of the unit sphere S^{n-1} in R^n (n >= 2):
//   omega_n = 2 pi^{n/2} / Gamma(n/2),  e.g. omega_3 = 4 pi.
double surface_area(int n);

// Dimension of the space of spherical harmonics of degree l on S^{n-1}:
//   N(n,0) = 1,  N(n,l) = (2l+n-2)/l * C(l+n-3, l-1)  for l >= 1.
// For n = 3 this is 2l+1.  Throws if the value would not be exactly
// representable (astronomically large n, l).
std::int64_t harmonic_dim(int n, int l);

// Same value as a double, for use in spectral weights.
double harmonic_dim_d(int n, int l);

}  // namespace spdo
