#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/field.hpp"

using namespace fraclab;

TEST_CASE("square grid puts the anchor node on the center") {
  Grid2 g = Grid2::square(4.0, 256, {0.5, -1.0});
  CHECK(g.h() == doctest::Approx(4.0 / 256));
  CHECK(g.center().x == doctest::Approx(0.5));
  CHECK(g.center().y == doctest::Approx(-1.0));
  CHECK(g.size() == 256u * 256u);
}

TEST_CASE("sample zeroes outside the support and rejects non-finite values") {
  Grid2 g = Grid2::square(2.0, 16);
  VectorField2 u = sample([](Point) { return cplx{1.0, 0.0}; }, g, 0.5);
  int inside = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      bool in = dist(g.node(i, j), {}) <= 0.5;
      CHECK(std::abs(u(i, j)) == (in ? 1.0 : 0.0));
      inside += in;
    }
  CHECK(inside > 0);
  CHECK_THROWS_AS(sample([](Point p) { return cplx{1.0 / p.x, 0.0}; }, g, 0.5), InvalidInput);
}

TEST_CASE("l2 norm of a constant over a mask") {
  Grid2 g = Grid2::square(1.0, 8);
  VectorField2 u(g, 10.0);
  for (auto& v : u.mutable_values()) v = {3.0, 4.0};
  CHECK(l2_norm(u) == doctest::Approx(25.0));  // h^2 * 64 * 25
  Mask m(g.size(), 0);
  m[0] = m[1] = 1;
  CHECK(l2_norm(u, &m) == doctest::Approx(2 * 25.0 / 64));
}

TEST_CASE("raster round trip is exact") {
  Grid2 g({-1.0, 0.25}, 0.125, 5, 3);
  VectorField2 u(g, 100.0);
  for (std::size_t k = 0; k < g.size(); ++k) u.mutable_values()[k] = {0.1 * k, -1.0 / (k + 1)};
  std::stringstream ss;
  write_raster(ss, u);
  VectorField2 v = read_vector_raster(ss, 100.0);
  CHECK(v.grid() == g);
  CHECK(v.values() == u.values());

  ScalarField f(g);
  for (std::size_t k = 0; k < g.size(); ++k) f.values[k] = std::sqrt(static_cast<double>(k));
  std::stringstream s2;
  write_raster(s2, f);
  ScalarField f2 = read_scalar_raster(s2);
  CHECK(f2.values == f.values);
}

TEST_CASE("disk domain masks and boundary loops") {
  Grid2 g = Grid2::square(4.0, 128);
  DomainSpec dom = DomainSpec::disk(g, {0.0, 0.0}, 1.0, 0.25, 3.8, 1);
  std::size_t open = 0, closed = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    open += dom.omega[k];
    closed += dom.omega_closed[k];
    if (dom.omega[k]) CHECK(dom.omega_closed[k]);
  }
  CHECK(open <= closed);
  // Node count approximates the area pi / h^2.
  CHECK(closed * g.cell_area() == doctest::Approx(std::numbers::pi).epsilon(0.02));
  Mask t = dom.omega_tilde();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (dom.omega_closed[k]) CHECK(t[k]);

  auto loop = dom.dilated_boundary(0.1);
  double area = 0.0;  // shoelace, positive for counterclockwise
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const Point& a = loop[k];
    const Point& b = loop[(k + 1) % loop.size()];
    area += 0.5 * (a.x * b.y - b.x * a.y);
    CHECK(dist(a, {}) == doctest::Approx(1.1));
  }
  CHECK(area == doctest::Approx(std::numbers::pi * 1.21).epsilon(1e-3));
  CHECK_THROWS_AS(DomainSpec::disk(g, {0.0, 0.0}, 1.9, 0.25, 3.8, 1), InvalidInput);
}

TEST_CASE("S1 constraint report lists offending nodes") {
  Grid2 g = Grid2::square(4.0, 64);
  DomainSpec dom = DomainSpec::disk(g, {0.0, 0.0}, 1.0, 0.25, 3.8, 0);
  VectorField2 u(g, 10.0);
  for (auto& v : u.mutable_values()) v = {1.0, 0.0};
  CHECK(check_s1_constraint(u, dom, 1e-12).passed);
  u(32, 32) = {0.5, 0.0};
  S1Report r = check_s1_constraint(u, dom, 1e-12);
  CHECK_FALSE(r.passed);
  CHECK(r.max_modulus_error == doctest::Approx(0.5));
  REQUIRE(r.offending_nodes.size() == 1);
  CHECK(r.offending_nodes[0] == g.index(32, 32));
}

TEST_CASE("compensated sum keeps small addends") {
  CompensatedSum s;
  s.add(1e16);
  for (int k = 0; k < 1000; ++k) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}
