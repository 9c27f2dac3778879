#pragma once

#include <vector>

#include <Eigen/Dense>

#include "spdo/shape.hpp"

namespace spdo {

// A function on S^{n-1} held by its spherical-harmonic content, in one of
// two modes:
//
//  * zonal: v(x) = sum_l a_l P_l(n; x.axis).  Works in any ambient
//    dimension; per-degree quantities come from the addition formula
//      sum_m vhat_{l,m} what_{l,m} = a_l b_l omega_n / N(n,l) * P_l(n; p.q).
//
//  * general (n = 3 only): a flat real coefficient vector vhat_{l,m} against
//    the orthonormal basis of real_harmonics_n3, layout harmonic_index(l,m).
class SpectralFunction {
 public:
  SpectralFunction() = default;

  static SpectralFunction zonal(int n, const Eigen::VectorXd& axis,
                                std::vector<double> legendre_coeffs);
  static SpectralFunction general3(std::vector<double> flat_coeffs);

  int n() const { return n_; }
  int l_max() const { return l_max_; }
  bool is_zonal() const { return zonal_; }

  const Eigen::VectorXd& axis() const;
  double zonal_coeff(int l) const;            // zonal mode
  double coeff(int l, int m) const;           // general mode
  const std::vector<double>& flat() const;    // general mode

  // Pointwise evaluation (general mode requires n = 3).
  double eval(const Eigen::VectorXd& x) const;

  // sum_m vhat_{l,m}^2 for one degree.
  double sum_m_sq(int l) const;

  // Zonal -> general conversion (n = 3), truncated/padded to new_l_max
  // (default: keep l_max()).
  SpectralFunction to_general3(int new_l_max = -1) const;

 private:
  int n_ = 3;
  int l_max_ = -1;  // -1: the zero function
  bool zonal_ = true;
  Eigen::VectorXd axis_;
  std::vector<double> zcoeff_;
  std::vector<double> gcoeff_;
};

// sum_m vhat_{l,m} what_{l,m} for one degree; both arguments on the same
// sphere.  Mixed zonal/general pairs are supported for n = 3.
double cross_l(const SpectralFunction& v, const SpectralFunction& w, int l);

// Sobolev inner product and norm of order s:
//   <v,w>_s = sum_l (1+l)^{2s} sum_m vhat what,   ||v||_s = sqrt(<v,v>_s).
double inner_s(const SpectralFunction& v, const SpectralFunction& w, double s);
double sobolev_norm(const SpectralFunction& v, double s);

// Native-space inner product induced by a shape function:
//   <v,w>_phi = sum_l (1/phi_hat(l)) sum_m vhat what,
// truncated at min(v.l_max, w.l_max, table).
double native_inner(const SpectralFunction& v, const SpectralFunction& w,
                    const ShapeFunction& phi);

}  // namespace spdo
