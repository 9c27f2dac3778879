#include "spdo/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "spdo/harmonics.hpp"
#include "spdo/legendre.hpp"
#include "spdo/sphere.hpp"

namespace spdo {

SpectralFunction SpectralFunction::zonal(int n, const Eigen::VectorXd& axis,
                                         std::vector<double> legendre_coeffs) {
  if (n < 2) throw std::invalid_argument("SpectralFunction: need n >= 2");
  if (axis.size() != n) throw std::invalid_argument("SpectralFunction: axis dimension != n");
  if (std::abs(axis.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("SpectralFunction: axis is not a unit vector");
  }
  SpectralFunction f;
  f.n_ = n;
  f.zonal_ = true;
  f.axis_ = axis;
  f.zcoeff_ = std::move(legendre_coeffs);
  f.l_max_ = static_cast<int>(f.zcoeff_.size()) - 1;
  return f;
}

SpectralFunction SpectralFunction::general3(std::vector<double> flat_coeffs) {
  const auto size = flat_coeffs.size();
  int lmax = -1;
  while ((static_cast<std::size_t>(lmax + 2)) * (lmax + 2) <= size) ++lmax;
  if (static_cast<std::size_t>(lmax + 1) * (lmax + 1) != size) {
    throw std::invalid_argument(
        "SpectralFunction::general3: coefficient length must be a perfect square");
  }
  SpectralFunction f;
  f.n_ = 3;
  f.zonal_ = false;
  f.gcoeff_ = std::move(flat_coeffs);
  f.l_max_ = lmax;
  return f;
}

const Eigen::VectorXd& SpectralFunction::axis() const {
  if (!zonal_) throw std::logic_error("SpectralFunction: no axis in general mode");
  return axis_;
}

double SpectralFunction::zonal_coeff(int l) const {
  if (!zonal_) throw std::logic_error("SpectralFunction: zonal_coeff in general mode");
  if (l < 0) throw std::invalid_argument("zonal_coeff: l < 0");
  if (l > l_max_) return 0.0;
  return zcoeff_[static_cast<std::size_t>(l)];
}

double SpectralFunction::coeff(int l, int m) const {
  if (zonal_) throw std::logic_error("SpectralFunction: coeff(l,m) in zonal mode");
  if (l < 0 || std::abs(m) > l) throw std::invalid_argument("coeff: bad (l,m)");
  if (l > l_max_) return 0.0;
  return gcoeff_[static_cast<std::size_t>(harmonic_index(l, m))];
}

const std::vector<double>& SpectralFunction::flat() const {
  if (zonal_) throw std::logic_error("SpectralFunction: flat() in zonal mode");
  return gcoeff_;
}

double SpectralFunction::eval(const Eigen::VectorXd& x) const {
  if (l_max_ < 0) return 0.0;
  if (zonal_) {
    const double t = clamp_abscissa(axis_.dot(x));
    return legendre_weighted_sum(n_, l_max_, t, zcoeff_.data());
  }
  if (x.size() != 3) throw std::invalid_argument("eval: general mode needs n = 3");
  const Eigen::VectorXd y = real_harmonics_n3(l_max_, Eigen::Vector3d(x(0), x(1), x(2)));
  double acc = 0.0;
  for (std::size_t i = 0; i < gcoeff_.size(); ++i) acc += gcoeff_[i] * y(static_cast<Eigen::Index>(i));
  return acc;
}

double SpectralFunction::sum_m_sq(int l) const {
  if (l < 0) throw std::invalid_argument("sum_m_sq: l < 0");
  if (l > l_max_) return 0.0;
  if (zonal_) {
    const double a = zcoeff_[static_cast<std::size_t>(l)];
    return a * a * surface_area(n_) / harmonic_dim_d(n_, l);
  }
  double acc = 0.0;
  for (int m = -l; m <= l; ++m) {
    const double c = gcoeff_[static_cast<std::size_t>(harmonic_index(l, m))];
    acc += c * c;
  }
  return acc;
}

SpectralFunction SpectralFunction::to_general3(int new_l_max) const {
  if (n_ != 3) throw std::logic_error("to_general3: only defined for n = 3");
  if (new_l_max < 0) new_l_max = l_max_ < 0 ? 0 : l_max_;
  std::vector<double> flat(static_cast<std::size_t>(new_l_max + 1) * (new_l_max + 1), 0.0);
  if (l_max_ >= 0) {
    if (zonal_) {
      // vhat_{l,m} = a_l * omega_n / N(n,l) * Y_{l,m}(axis)
      const Eigen::VectorXd y =
          real_harmonics_n3(std::min(l_max_, new_l_max),
                            Eigen::Vector3d(axis_(0), axis_(1), axis_(2)));
      const double omega = surface_area(3);
      for (int l = 0; l <= std::min(l_max_, new_l_max); ++l) {
        const double f = zcoeff_[static_cast<std::size_t>(l)] * omega / harmonic_dim_d(3, l);
        for (int m = -l; m <= l; ++m) {
          flat[static_cast<std::size_t>(harmonic_index(l, m))] = f * y(harmonic_index(l, m));
        }
      }
    } else {
      const int lcopy = std::min(l_max_, new_l_max);
      for (int l = 0; l <= lcopy; ++l) {
        for (int m = -l; m <= l; ++m) {
          flat[static_cast<std::size_t>(harmonic_index(l, m))] =
              gcoeff_[static_cast<std::size_t>(harmonic_index(l, m))];
        }
      }
    }
  }
  return general3(std::move(flat));
}

double cross_l(const SpectralFunction& v, const SpectralFunction& w, int l) {
  if (v.n() != w.n()) throw std::invalid_argument("cross_l: mismatched sphere dimensions");
  if (l > v.l_max() || l > w.l_max()) return 0.0;
  if (v.is_zonal() && w.is_zonal()) {
    const double t = clamp_abscissa(v.axis().dot(w.axis()));
    return v.zonal_coeff(l) * w.zonal_coeff(l) * surface_area(v.n()) /
           harmonic_dim_d(v.n(), l) * legendre_eval(v.n(), l, t);
  }
  if (!v.is_zonal() && !w.is_zonal()) {
    double acc = 0.0;
    for (int m = -l; m <= l; ++m) acc += v.coeff(l, m) * w.coeff(l, m);
    return acc;
  }
  // mixed: sum_m vhat_{l,m} * b_l omega/N * Y_{l,m}(q)   (n = 3 only)
  const SpectralFunction& gen = v.is_zonal() ? w : v;
  const SpectralFunction& zon = v.is_zonal() ? v : w;
  if (gen.n() != 3) throw std::invalid_argument("cross_l: mixed modes need n = 3");
  const Eigen::VectorXd y =
      real_harmonics_n3(l, Eigen::Vector3d(zon.axis()(0), zon.axis()(1), zon.axis()(2)));
  double dot = 0.0;
  for (int m = -l; m <= l; ++m) dot += gen.coeff(l, m) * y(harmonic_index(l, m));
  return dot * zon.zonal_coeff(l) * surface_area(3) / harmonic_dim_d(3, l);
}

double inner_s(const SpectralFunction& v, const SpectralFunction& w, double s) {
  const int lmax = std::min(v.l_max(), w.l_max());
  double acc = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    acc += std::pow(1.0 + l, 2.0 * s) * cross_l(v, w, l);
  }
  return acc;
}

double sobolev_norm(const SpectralFunction& v, double s) {
  double acc = 0.0;
  for (int l = 0; l <= v.l_max(); ++l) {
    acc += std::pow(1.0 + l, 2.0 * s) * v.sum_m_sq(l);
  }
  return std::sqrt(acc);
}

double native_inner(const SpectralFunction& v, const SpectralFunction& w,
                    const ShapeFunction& phi) {
  if (v.n() != phi.n() || w.n() != phi.n()) {
    throw std::invalid_argument("native_inner: mismatched sphere dimensions");
  }
  const int lmax = std::min({v.l_max(), w.l_max(), phi.table_l_max()});
  double acc = 0.0;
  for (int l = 0; l <= lmax; ++l) {
    acc += cross_l(v, w, l) / phi.coeff(l);
  }
  return acc;
}

}  // namespace spdo
