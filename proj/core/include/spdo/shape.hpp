#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace spdo {

// A zonal shape function theta on S^{n-1}, held as its coefficient table
// against the normalized Legendre family:
//   theta(x.y) = sum_l omega_n^{-1} N(n,l) theta_hat(l) P_l(n; x.y),
//   theta_hat(l) = omega_{n-1} int_{-1}^{1} theta(t) P_l(n;t) (1-t^2)^{(n-3)/2} dt.
// Coefficients must be strictly positive (positive definiteness of the
// induced kernel); construction enforces this.
class ShapeFunction {
 public:
  ShapeFunction() = default;

  // Wrap an externally supplied coefficient table.  `tau` declares the decay
  // exponent phi_hat(l) ~ (1+l)^{-2 tau} used by native-space bookkeeping.
  static ShapeFunction from_coeffs(int n, std::vector<double> coeffs, double tau,
                                   std::string name = "custom");

  int n() const { return n_; }
  int table_l_max() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int l) const { return coeffs_.at(static_cast<std::size_t>(l)); }
  double tau() const { return tau_; }
  const std::string& name() const { return name_; }

  bool has_closed_form() const { return static_cast<bool>(closed_form_); }
  double closed_form(double t) const;

  bool has_kink() const { return kink_.has_value(); }
  double kink() const { return kink_.value(); }

  // Used by the factory functions below.
  void set_closed_form(std::function<double(double)> f, std::optional<double> kink);
  void set_tau(double tau) { tau_ = tau; }

 private:
  int n_ = 3;
  std::vector<double> coeffs_;
  double tau_ = 0.0;
  std::string name_;
  std::function<double(double)> closed_form_;
  std::optional<double> kink_;
};

// Compactly supported Wendland-type shape: rho(r) = (1-r)_+^2 composed with
// the chordal distance, theta(t) = rho(sqrt(2-2t)).  Supported on t > 1/2
// (geodesic caps of chordal radius 1), with a derivative kink at t = 1/2.
// Coefficients are computed by Gauss-Legendre quadrature split at the kink;
// on the support panel the substitution r = sqrt(2-2t) makes the integrand
// smooth (polynomial for odd n), so the rule is exact there.  For n = 3 the
// decay exponent is tau = 3/2; for other n it is taken from the decay fit.
ShapeFunction wendland_shape(int n, int table_l_max);

// Least-squares fit of log theta_hat(l) against log(1+l) over l in [lo, hi]
// (defaults: upper half of the table).  tau_hat is half the negated slope;
// c1/c2 are the min/max of theta_hat(l) (1+l)^{2 tau_hat} over all tabulated
// l >= 1, so c1 (1+l)^{-2 tau_hat} <= theta_hat(l) <= c2 (1+l)^{-2 tau_hat}
// holds on the table by construction.
struct DecayFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double tau_hat = 0.0;
};
DecayFit shape_decay_fit(const ShapeFunction& shape, int lo = -1, int hi = -1);

// Kernel evaluation theta(t): the closed form when available, otherwise the
// truncated coefficient series.
double kernel_eval(const ShapeFunction& shape, double t);

// Truncated coefficient series, always:
//   sum_{l<=table} omega_n^{-1} N(n,l) theta_hat(l) P_l(n;t).
// Near t = 1 this deviates from the closed form by the series tail (the
// truncation-bound machinery quantifies it); in the bulk of [-1,1] the two
// agree to a few 1e-6 at table length 400.
double kernel_eval_series(const ShapeFunction& shape, double t);

// CSV persistence: "l,coefficient" rows with metadata in '#' header lines.
// Values are written with 17 significant digits, so save/load round-trips
// are bit-exact.  Loading a table whose name is "wendland" reattaches the
// closed form.
void save_shape_csv(const ShapeFunction& shape, const std::string& path);
ShapeFunction load_shape_csv(const std::string& path);

}  // namespace spdo
