#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclab/topology.hpp"
#include "fraclab/vortex.hpp"

using namespace fraclab;
constexpr double pi = std::numbers::pi;

TEST_CASE("Jacobian of a linear map is its determinant") {
  Grid2 g = Grid2::square(2.0, 12);
  VectorField2 u(g, 10.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Point x = g.node(i, j);
      u(i, j) = {2.0 * x.x + 0.5 * x.y, -x.x + 3.0 * x.y};
    }
  JacobianField J = jacobian(u), D = jacobian_divergence_form(u);
  for (std::size_t k = 0; k < J.values.size(); ++k) {
    CHECK(J.values[k] == doctest::Approx(6.5));
    CHECK(D.values[k] == doctest::Approx(6.5));
  }
  CHECK(J.integral() == doctest::Approx(6.5 * 11 * 11 * g.cell_area()));
}

TEST_CASE("cell and divergence forms agree on a general field") {
  Grid2 g = Grid2::square(2.0, 24);
  VectorField2 u = sample([](Point p) { return cplx{std::sin(3 * p.x + p.y * p.y), std::cos(2 * p.y) * p.x}; }, g, 5.0);
  JacobianField J = jacobian(u), D = jacobian_divergence_form(u);
  for (std::size_t k = 0; k < J.values.size(); ++k) CHECK(std::abs(J.values[k] - D.values[k]) < 1e-12);
}

TEST_CASE("curl of the current is twice the Jacobian for smooth fields") {
  Grid2 g = Grid2::square(2.0, 128);
  VectorField2 u = sample([](Point p) { return cplx{std::sin(p.x + 0.5 * p.y), p.x * p.y + 1.0}; }, g, 5.0);
  JacobianField c = curl_cells(current(u)), J = jacobian(u);
  double worst = 0.0;
  for (int j = 8; j < J.cy() - 8; ++j)
    for (int i = 8; i < J.cx() - 8; ++i) worst = std::max(worst, std::abs(c.at(i, j) - 2.0 * J.at(i, j)));
  CHECK(worst < 1e-2);
}

TEST_CASE("degrees of vortex blocks are integers") {
  Grid2 g = Grid2::square(2.0, 64);
  Point c = snap_to_cell_center(g, {0.1, -0.05});
  for (int d : {-2, -1, 1, 2, 3}) {
    VectorField2 u = build_block(c, d, g);
    DegreeResult r = degree(u, circle_loop(c, 0.5, g.h()));
    CHECK(r.degree == d);
    CHECK(r.residual < 0.1);
    CHECK(r.min_modulus > 0.99);  // bilinear chords dip below the circle
    // Smoothed cores let the area formula see the charge.
    VectorField2 t = truncate_cores(u, DiracSum{{{c, d}}}, 0.15);
    CHECK(area_degree(t, cells_in_disk(g, c, 0.5)) == doctest::Approx(d).epsilon(0.2 / std::abs(d)));
  }
}

TEST_CASE("degree errors") {
  Grid2 g = Grid2::square(2.0, 32);
  Point c = snap_to_cell_center(g, {0.0, 0.0});
  VectorField2 u = truncate_cores(build_block(c, 1, g), DiracSum{{{c, 1}}}, 0.5);
  CHECK_THROWS_AS(degree(u, circle_loop(c, 0.2, g.h())), InvalidInput);
  // Four samples per turn cannot resolve d = 3: the phase steps alias to
  // -pi/2 and the trapezoid winding lands far from an integer.
  VectorField2 v = build_block(c, 3, g);
  std::vector<Point> sq = {{c.x + 0.5, c.y}, {c.x, c.y + 0.5}, {c.x - 0.5, c.y}, {c.x, c.y - 0.5}};
  CHECK_THROWS_AS(degree(v, sq), DegreeError);
}

TEST_CASE("Jacobian difference identity and flat bound") {
  Grid2 g = Grid2::square(2.0, 32);
  VectorField2 v = sample([](Point p) { return cplx{p.x * p.x, std::sin(p.y)}; }, g, 5.0);
  VectorField2 w = sample([](Point p) { return cplx{std::cos(p.x * p.y), p.x - p.y}; }, g, 5.0);
  JacobianField lhs = jacobian_difference_identity(v, w), a = jacobian(v), b = jacobian(w);
  for (std::size_t k = 0; k < lhs.values.size(); ++k) CHECK(lhs.values[k] == doctest::Approx(a.values[k] - b.values[k]));
  CHECK(jacobian_flat_distance_bound(v, v) == 0.0);
  CHECK(jacobian_flat_distance_bound(v, w) > 0.0);
  (void)pi;
}
