#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclab/riesz.hpp"

using namespace fraclab;

namespace {

VectorField2 gaussian(const Grid2& g, double support) {
  return sample([](Point p) { return std::exp(-8.0 * (p.x * p.x + p.y * p.y)) * cplx{1.0, p.x}; }, g, support);
}

}  // namespace

TEST_CASE("FFT potential equals the direct convolution") {
  Grid2 g = Grid2::square(2.0, 20);
  VectorField2 u = gaussian(g, 0.6);
  for (auto norm : {Normalization::raw, Normalization::normalized}) {
    RieszKernel K = make_riesz_kernel(make_params(0.8, 1.3), g, norm);
    VectorField2 a = potential(u, K), b = potential_direct(u, K);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(a.values()[k] - b.values()[k]) < 1e-12);
  }
}

TEST_CASE("normalised kernel carries unit mass") {
  Grid2 g = Grid2::square(8.0, 128);
  for (double s : {0.5, 0.9, 0.99}) {
    RieszKernel K = make_riesz_kernel(make_params(s, 3.0), g, Normalization::normalized);
    CHECK(K.total_mass() == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("raw and normalised potentials differ by the quoz factor") {
  Grid2 g = Grid2::square(4.0, 64);
  VectorField2 u = gaussian(g, 1.2);
  FracParams p = make_params(0.9, 2.6);
  VectorField2 a = potential(u, p, Normalization::raw), b = potential(u, p, Normalization::normalized);
  for (std::size_t k = 0; k < g.size(); k += 37)
    CHECK(std::abs(a.values()[k] - p.quoz_factor * b.values()[k]) < 1e-12 * (1 + std::abs(a.values()[k])));
  ScalarField Ja = jacobian_of_potential(u, p, Normalization::raw);
  ScalarField Jb = jacobian_of_potential(u, p, Normalization::normalized);
  for (std::size_t k = 0; k < g.size(); k += 37)
    CHECK(Ja.values[k] == doctest::Approx(p.c_dprime_s * Jb.values[k]).epsilon(1e-10));
}

TEST_CASE("fractional gradient identity on a Gaussian at s = 0.9") {
  // grad_s u by singular quadrature vs grad of I_{1-s}u at nodes well inside
  // the region where the truncation at R is invisible.
  Grid2 g = Grid2::square(4.0, 64);
  VectorField2 u = gaussian(g, 1.5);
  FracParams p = make_params(0.9, 3.2);
  FracGradField fft = frac_gradient(u, p);
  std::vector<std::size_t> nodes;
  for (int j = 16; j < 48; j += 3)
    for (int i = 16; i < 48; i += 3) nodes.push_back(g.index(i, j));
  auto direct = frac_gradient_direct(u, p, nodes);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double d = direct[k][a][b], f = fft.values[nodes[k]][a][b];
        num += (d - f) * (d - f);
        den += d * d;
      }
  CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("support precondition and FFT size cap") {
  Grid2 g = Grid2::square(4.0, 32);
  VectorField2 u = gaussian(g, 1.5);
  CHECK_THROWS_AS(potential(u, make_params(0.9, 2.5), Normalization::raw), InvalidInput);
  PotentialOptions o;
  o.max_fft_size = 16;
  CHECK_THROWS_AS(potential(u, make_params(0.9, 3.2), Normalization::raw, o), InvalidInput);
}
