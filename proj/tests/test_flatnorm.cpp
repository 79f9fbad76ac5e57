#include <doctest.h>

#include <cmath>

#include "fraclab/flatnorm.hpp"
#include "support/lp_oracle.hpp"

using namespace fraclab;

namespace {

const Grid2 g16 = Grid2::square(1.0, 16);

double lp_value(const FlatInput& in) {
  return oracle::flat_norm_lp(in.grid.nx(), in.grid.ny(), in.grid.h(), in.region, in.mass,
                              in.ball == FlatBall::paper);
}

}  // namespace

TEST_CASE("delta mass has closed flat norm one") {
  FlatInput in(g16, Mask(g16.size(), 1));
  in.add_atom({0.1, -0.2}, 1.0);
  FlatNormResult r = flat_norm(in);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.primal_dual_gap <= 1e-6);
  CHECK(r.sup + r.lipschitz <= 1.0 + 1e-12);
}

TEST_CASE("dipole against closed forms and the LP oracle") {
  const double d = 0.5;
  for (FlatBall ball : {FlatBall::paper, FlatBall::simple}) {
    FlatInput in(g16, Mask(g16.size(), 1), FlatVariant::closed, ball);
    in.add_atom({-0.25, 0.0}, 1.0);
    in.add_atom({0.25, 0.0}, -1.0);
    FlatNormResult r = flat_norm(in, {1e-8, 400000});
    const double exact = ball == FlatBall::paper ? 2 * d / (2 + d) : d;
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-6));
    CHECK(std::abs(r.value - lp_value(in)) < 1e-6);
    CHECK(r.primal_dual_gap <= 1e-6);
  }
}

TEST_CASE("off-axis three-atom measure against the LP oracle") {
  for (FlatBall ball : {FlatBall::paper, FlatBall::simple}) {
    FlatInput in(g16, Mask(g16.size(), 1), FlatVariant::closed, ball);
    in.add_atom({-0.3125, -0.125}, 1.0);
    in.add_atom({0.1875, 0.25}, -0.5);
    in.add_atom({0.25, -0.375}, -0.75);
    FlatNormResult r = flat_norm(in, {1e-8, 400000});
    CHECK(std::abs(r.value - lp_value(in)) < 1e-6);
    CHECK(r.primal_dual_gap <= 1e-6);
    CHECK(r.upper >= r.value);
  }
}

TEST_CASE("open variant pins the boundary and lowers the norm") {
  Mask disk(g16.size(), 0);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) disk[g16.index(i, j)] = dist(g16.node(i, j), {}) < 0.45;
  FlatInput closed(g16, disk, FlatVariant::closed), open(g16, disk, FlatVariant::open);
  closed.add_atom({0.0, 0.0}, 1.0);
  open.add_atom({0.0, 0.0}, 1.0);
  FlatNormResult rc = flat_norm(closed), ro = flat_norm(open);
  CHECK(rc.value == doctest::Approx(1.0));
  CHECK(ro.value < rc.value);
  CHECK(ro.primal_dual_gap <= 1e-6);
  // phi vanishes on pinned nodes.
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) {
      std::size_t k = g16.index(i, j);
      bool pinned = false;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (!g16.contains_index(i + di, j + dj) || !disk[g16.index(i + di, j + dj)]) pinned = true;
      if (disk[k] && pinned) CHECK(ro.phi.values[k] == 0.0);
    }
}

TEST_CASE("cell densities are lumped onto corners with exact mass") {
  JacobianField J(g16);
  for (std::size_t k = 0; k < J.values.size(); ++k) J.values[k] = 1.0 + 0.01 * k;
  Mask disk(g16.size(), 0);
  for (std::size_t k = 0; k < g16.size(); ++k) disk[k] = 1;
  FlatInput in(g16, disk);
  in.add_cells(J, 2.0);
  CHECK(in.total_mass() == doctest::Approx(2.0 * J.integral()));
}

TEST_CASE("flat norm input errors") {
  Mask half(g16.size(), 0);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 8; ++i) half[g16.index(i, j)] = 1;
  FlatInput in(g16, half);
  CHECK_THROWS_AS(in.add_atom({0.3, 0.0}, 1.0), InvalidInput);
  Mask split(g16.size(), 0);
  split[g16.index(2, 2)] = split[g16.index(10, 10)] = 1;
  FlatInput two(g16, split);
  two.add_atom(g16.node(2, 2), 1.0);
  CHECK_THROWS_AS(flat_norm(two), InvalidInput);
  FlatInput ok(g16, Mask(g16.size(), 1));
  ok.add_atom({0.0, 0.0}, 1.0);
  ok.add_atom({0.25, 0.0}, -1.0);
  CHECK_THROWS_AS(flat_norm(ok, {1e-12, 64}), FlatNormError);
}
