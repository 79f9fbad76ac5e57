#pragma once

namespace fraclab {

/// Euler Gamma for x > 0 (Lanczos, g = 7); throws InvalidInput otherwise.
double gamma_fn(double x);

/// All s-dependent constants of the fractional energies, for 0 < s < 1 and
/// kernel radius R > 0.
struct FracParams {
  double s = 0.0;
  double eps = 0.0;  // sqrt(1 - s), the Ginzburg-Landau length
  double R = 0.0;
  /// Riesz normalisation: I_{1-s}u = gamma_s^{-1} int u(y) |x-y|^{-(1+s)} dy.
  double gamma_s = 0.0;
  /// Seminorm-to-fractional-gradient constant: int |grad_s u|^2 = (1-s) c_s [u]^2,
  /// c_s -> 2/pi as s -> 1.
  double c_s = 0.0;
  double c_prime_s = 0.0;   // c_s pi / R^{2s}
  double c_dprime_s = 0.0;  // quoz_factor^2: |grad I u|^2 = c'' |grad I~ u|^2
  /// I_{1-s}u / I~_{1-s}u = gamma_s^{-1} 2 pi R^{1-s} / (1-s) -> 1 as s -> 1.
  double quoz_factor = 0.0;
  /// Prefactor of the fractional-gradient integral
  ///   grad_s u(x) = grad_constant * int (u(y)-u(x)) (x) (y-x) / |y-x|^{3+s} dy,
  /// equal to (1+s)/gamma_s.
  double grad_constant = 0.0;

  double bbm_weight() const { return (1.0 - s) * c_s; }
};

FracParams make_params(double s, double R);

/// (1 - s) c_s in closed form: s 4^s Gamma(1+s) / (2 pi Gamma(1-s)).
double bbm_weight(double s);

/// |log(1 - s)|, the energy scaling.
double log_scale(double s);

}  // namespace fraclab
