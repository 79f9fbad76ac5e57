#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fraclab/energy.hpp"
#include "fraclab/vortex.hpp"

using namespace fraclab;
constexpr double pi = std::numbers::pi;

namespace {

VectorField2 random_field(const Grid2& g, double support, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  VectorField2 u(g, support);
  for (auto& v : u.mutable_values()) v = {n(rng), n(rng)};
  u.enforce_support();
  return u;
}

}  // namespace

TEST_CASE("FFT seminorm equals the direct pair sum") {
  Grid2 g = Grid2::square(2.0, 16);
  for (unsigned seed : {1u, 2u}) {
    VectorField2 u = random_field(g, 0.7, seed);
    for (double s : {0.3, 0.9, 0.99}) CHECK(gagliardo_seminorm(u, s) == doctest::Approx(gagliardo_direct(u, s)).epsilon(1e-10));
  }
}

TEST_CASE("region seminorm equals its direct sum and the split adds up") {
  Grid2 g = Grid2::square(2.0, 16);
  VectorField2 u = random_field(g, 0.9, 5);
  Mask m(g.size(), 0);
  for (int j = 2; j < 11; ++j)
    for (int i = 4; i < 14; ++i) m[g.index(i, j)] = 1;
  CHECK(gagliardo_on_region(u, m, 0.7) == doctest::Approx(gagliardo_on_region_direct(u, m, 0.7)).epsilon(1e-10));
  GagliardoSplit sp = gagliardo_split(u, 0.8, 0.3);
  CHECK(sp.near + sp.tail == doctest::Approx(sp.total));
  CHECK(sp.total == doctest::Approx(gagliardo_seminorm(u, 0.8)));
  CHECK(gagliardo_seminorm(u, 0.8, 0.3) == doctest::Approx(sp.near));
}

TEST_CASE("seminorm scales like lambda^{2-2s} under dilation") {
  // [u(./lambda)]^2 = lambda^{2-2s} [u]^2 in two dimensions; the same nodal
  // data on a grid with spacing lambda h realises the dilation exactly.
  Grid2 g1 = Grid2::square(2.0, 16), g2 = Grid2::square(6.0, 16);
  VectorField2 u1 = random_field(g1, 0.7, 9);
  VectorField2 u2(g2, u1.values(), 2.1);
  for (double s : {0.4, 0.9})
    CHECK(gagliardo_seminorm(u2, s) == doctest::Approx(std::pow(3.0, 2 - 2 * s) * gagliardo_seminorm(u1, s)).epsilon(1e-10));
}

TEST_CASE("Dirichlet energy of a linear ramp") {
  Grid2 g = Grid2::square(2.0, 32);
  VectorField2 u(g, 10.0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) u(i, j) = {2.0 * g.node(i, j).x, 0.0};
  Mask inner(g.size(), 0);
  for (int j = 4; j < 28; ++j)
    for (int i = 4; i < 28; ++i) inner[g.index(i, j)] = 1;
  // |grad u|^2 = 4 on every interior node, h^2 per node.
  CHECK(dirichlet_energy_centered(u, &inner) == doctest::Approx(4.0 * 24 * 24 * g.cell_area()));
}

TEST_CASE("BBM: (1-s) c_s [u]^2 approaches the Dirichlet integral") {
  Grid2 g = Grid2::square(4.0, 128);
  VectorField2 u = sample([](Point p) { return cplx{std::exp(-4.0 * (p.x * p.x + p.y * p.y)), 0.0}; }, g, 1.9);
  double D = dirichlet_energy(u);
  double prev = INFINITY;
  for (double s : {0.9, 0.99, 0.999}) {
    double err = std::abs(bbm_weight(s) * gagliardo_seminorm(u, s) - D) / D;
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("f_s splits the seminorm and fills the GL terms") {
  Grid2 g = Grid2::square(4.0, 64);
  DomainSpec dom = DomainSpec::disk(g, {0.0, 0.0}, 1.0, 0.25, 3.8, 1);
  RecoveryPair pr = build_recovery(RecoveryConfig{{{{{0.0, 0.0}, 1}}}, 0.2, 0.9, 8}, dom);
  FracParams p = make_params(0.9, 3.8);
  Mask omt = dom.omega_tilde();
  EnergyBreakdown e = f_s(pr.competitor, p, std::nullopt, &omt);
  CHECK(e.r_s == doctest::Approx(std::sqrt(0.1)));
  CHECK(e.gagliardo_near + e.gagliardo_tail == doctest::Approx(e.gagliardo));
  CHECK(e.F_s == doctest::Approx(p.bbm_weight() * e.gagliardo / log_scale(0.9)));
  CHECK(e.gl_dirichlet > 0.0);
  CHECK(e.gl_potential > 0.0);
  EnergyBreakdown bare = f_s(pr.competitor, p);
  CHECK(bare.gl_dirichlet == 0.0);
}

TEST_CASE("lower-bound chain holds for a smooth S1 field") {
  Grid2 g = Grid2::square(4.0, 64);
  DomainSpec dom = DomainSpec::disk(g, {0.0, 0.0}, 1.0, 0.25, 3.8, 0);
  VectorField2 u = build_boundary_datum(dom, 0);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Point x = g.node(i, j);
      u(i, j) *= std::polar(1.0, 2.0 * std::exp(-3.0 * (x.x * x.x + x.y * x.y)));
    }
  LowerBoundReport r = lower_bound_check(u, make_params(0.9, 3.8), dom, {0.25, 0.5, 0.75});
  CHECK(r.left <= r.middle + r.tolerance);
  CHECK(r.middle <= r.right);
  CHECK(r.right_cs > r.right);
  REQUIRE(r.chain.size() == 3);
  for (const ChainCheck& c : r.chain) CHECK(c.holds);
  CHECK(r.passed());
  CHECK_THROWS_AS(lower_bound_check(u, make_params(0.9, 3.8), dom, {1.5}), InvalidInput);
}

TEST_CASE("GL terms of the constant S1 field vanish") {
  Grid2 g = Grid2::square(2.0, 16);
  VectorField2 v(g, 10.0);
  for (auto& x : v.mutable_values()) x = {0.6, 0.8};
  Mask all(g.size(), 1);
  GLTerms t = ginzburg_landau(v, 0.1, 1.0, all);
  CHECK(t.dirichlet == doctest::Approx(0.0));
  CHECK(t.potential == doctest::Approx(0.0));
  (void)pi;
}
