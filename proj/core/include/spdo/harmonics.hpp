#pragma once

#include <Eigen/Dense>

namespace spdo {

// Real orthonormal spherical harmonics on S^2 (ambient dimension n = 3).
// Basis and ordering:
//   Y_{l,0}   = Pbar_{l,0}(z)
//   Y_{l,m>0} = sqrt(2) Pbar_{l,m}(z) cos(m phi)
//   Y_{l,-m}  = sqrt(2) Pbar_{l,m}(z) sin(m phi)
// with fully normalized associated Legendre functions Pbar (so that the
// basis is orthonormal in L2(S^2)) and z = x3, phi = atan2(x2, x1).
//
// Flat coefficient layout: degree l occupies indices l^2 .. l^2+2l with
// m = -l..l, i.e. index(l,m) = l^2 + l + m; total length (l_max+1)^2.

inline int harmonic_index(int l, int m) { return l * l + l + m; }

// Evaluate all Y_{l,m}(x) for l <= l_max at a unit vector x.
Eigen::VectorXd real_harmonics_n3(int l_max, const Eigen::Vector3d& x);

}  // namespace spdo
