#include "fraclab/constants.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fraclab/field.hpp"

namespace fraclab {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Lanczos sum for z >= 1, where the approximation is uniformly accurate.
double lanczos(double z) {
  double zm1 = z - 1.0;
  double a = kLanczos[0];
  double t = zm1 + kLanczosG + 0.5;
  for (std::size_t k = 1; k < kLanczos.size(); ++k) a += kLanczos[k] / (zm1 + static_cast<double>(k));
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, zm1 + 0.5) * std::exp(-t) * a;
}

void check_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("s must lie in (0, 1)");
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("gamma_fn needs a finite positive argument");
  // Shift small arguments up with Gamma(x) = Gamma(x + 1) / x.
  double scale = 1.0;
  while (x < 1.0) {
    scale /= x;
    x += 1.0;
  }
  return scale * lanczos(x);
}

double bbm_weight(double s) {
  check_s(s);
  return s * std::pow(4.0, s) * gamma_fn(1.0 + s) / (2.0 * std::numbers::pi * gamma_fn(1.0 - s));
}

double log_scale(double s) {
  check_s(s);
  return std::abs(std::log1p(-s));
}

FracParams make_params(double s, double R) {
  check_s(s);
  if (!(R > 0.0)) throw InvalidInput("kernel radius R must be positive");
  constexpr double pi = std::numbers::pi;
  FracParams p;
  p.s = s;
  p.eps = std::sqrt(1.0 - s);
  p.R = R;
  p.gamma_s = pi * std::pow(2.0, 1.0 - s) * gamma_fn(0.5 * (1.0 - s)) / gamma_fn(0.5 * (1.0 + s));
  // (1-s) Gamma(1-s) = Gamma(2-s) keeps c_s finite near s = 1.
  p.c_s = s * std::pow(4.0, s) * gamma_fn(1.0 + s) / (2.0 * pi * gamma_fn(2.0 - s));
  p.c_prime_s = p.c_s * pi / std::pow(R, 2.0 * s);
  p.quoz_factor = 2.0 * pi * std::pow(R, 1.0 - s) / ((1.0 - s) * p.gamma_s);
  p.c_dprime_s = p.quoz_factor * p.quoz_factor;
  p.grad_constant = (1.0 + s) / p.gamma_s;
  return p;
}

}  // namespace fraclab
