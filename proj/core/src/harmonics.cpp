#include "spdo/harmonics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spdo {

Eigen::VectorXd real_harmonics_n3(int l_max, const Eigen::Vector3d& x) {
  if (l_max < 0) throw std::invalid_argument("real_harmonics_n3: need l_max >= 0");
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("real_harmonics_n3: point is not a unit vector");
  }
  const double z = std::clamp(x.z(), -1.0, 1.0);
  const double s = std::hypot(x.x(), x.y());  // sin(theta) up to roundoff
  double cphi = 1.0, sphi = 0.0;
  if (s > 0.0) {
    cphi = x.x() / s;
    sphi = x.y() / s;
  }

  const int count = (l_max + 1) * (l_max + 1);
  Eigen::VectorXd out(count);

  // Pbar_{l,m} column by column in m, upward in l; standard stable scheme.
  // pbar_mm carries Pbar_{m,m}; for each m we walk l = m..l_max.
  const double inv_sqrt4pi = 1.0 / std::sqrt(4.0 * std::numbers::pi);
  std::vector<double> cosm(static_cast<std::size_t>(l_max) + 1);
  std::vector<double> sinm(static_cast<std::size_t>(l_max) + 1);
  cosm[0] = 1.0;
  sinm[0] = 0.0;
  for (int m = 1; m <= l_max; ++m) {
    cosm[static_cast<std::size_t>(m)] = cphi * cosm[static_cast<std::size_t>(m - 1)] - sphi * sinm[static_cast<std::size_t>(m - 1)];
    sinm[static_cast<std::size_t>(m)] = sphi * cosm[static_cast<std::size_t>(m - 1)] + cphi * sinm[static_cast<std::size_t>(m - 1)];
  }

  const double sqrt2 = std::numbers::sqrt2;
  double pbar_mm = inv_sqrt4pi;  // Pbar_{0,0}
  for (int m = 0; m <= l_max; ++m) {
    // fill column m: l = m, m+1, ..., l_max
    double plm2 = pbar_mm;  // Pbar_{m,m}
    {
      const double y = (m == 0) ? plm2 : sqrt2 * plm2;
      out(harmonic_index(m, m)) = (m == 0) ? y : y * cosm[static_cast<std::size_t>(m)];
      if (m > 0) out(harmonic_index(m, -m)) = sqrt2 * plm2 * sinm[static_cast<std::size_t>(m)];
    }
    if (m < l_max) {
      double plm1 = z * std::sqrt(2.0 * m + 3.0) * pbar_mm;  // Pbar_{m+1,m}
      {
        const double f = (m == 0) ? 1.0 : sqrt2;
        out(harmonic_index(m + 1, m)) = f * plm1 * ((m == 0) ? 1.0 : cosm[static_cast<std::size_t>(m)]);
        if (m > 0) out(harmonic_index(m + 1, -m)) = sqrt2 * plm1 * sinm[static_cast<std::size_t>(m)];
      }
      for (int l = m + 2; l <= l_max; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
        const double b = std::sqrt(((static_cast<double>(l - 1) * (l - 1)) - static_cast<double>(m) * m) /
                                   (4.0 * static_cast<double>(l - 1) * (l - 1) - 1.0));
        const double pl = a * (z * plm1 - b * plm2);
        plm2 = plm1;
        plm1 = pl;
        const double f = (m == 0) ? 1.0 : sqrt2;
        out(harmonic_index(l, m)) = f * pl * ((m == 0) ? 1.0 : cosm[static_cast<std::size_t>(m)]);
        if (m > 0) out(harmonic_index(l, -m)) = sqrt2 * pl * sinm[static_cast<std::size_t>(m)];
      }
    }
    // Pbar_{m+1,m+1} = -sqrt((2m+3)/(2m+2)) * s * Pbar_{m,m}   (Condon-Shortley)
    if (m < l_max) {
      pbar_mm *= -std::sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * s;
    }
  }
  return out;
}

}  // namespace spdo
