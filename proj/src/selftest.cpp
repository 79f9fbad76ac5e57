#include "fraclab/selftest.hpp"

#include <cmath>
#include <random>

#include "fraclab/energy.hpp"
#include "fraclab/flatnorm.hpp"
#include "fraclab/riesz.hpp"
#include "fraclab/topology.hpp"
#include "fraclab/vortex.hpp"

namespace fraclab {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<VectorField2> test_fields(const Grid2& g, double support) {
  std::vector<VectorField2> out;
  out.push_back(sample([](Point p) { return cplx{std::exp(-4.0 * (p.x * p.x + p.y * p.y)), 0.0}; }, g, support));
  out.push_back(sample(
      [](Point p) {
        double r = std::hypot(p.x, p.y);
        return r > 0.0 ? std::min(r / 0.2, 1.0) * cplx{p.x / r, p.y / r} : cplx{};
      },
      g, support));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  VectorField2 r(g, support);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) r(i, j) = {unit(rng), unit(rng)};
  r.enforce_support();
  out.push_back(std::move(r));
  return out;
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
  std::vector<SelfCheck> out;
  auto record = [&](const std::string& name, double err, double bound) {
    out.push_back({name, err <= bound, err, bound});
  };

  const Grid2 g = Grid2::square(2.0, 24);
  const auto fields = test_fields(g, 0.6);
  int k = 0;
  for (const VectorField2& u : fields) {
    const std::string tag = " #" + std::to_string(k++);
    for (double s : {0.5, 0.9}) {
      record("gagliardo fft = direct s=" + std::to_string(s).substr(0, 3) + tag,
             rel(gagliardo_seminorm(u, s), gagliardo_direct(u, s)), 1e-9);
    }
    Mask disk(g.size(), 0);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) disk[g.index(i, j)] = dist(g.node(i, j), {}) < 0.5;
    record("gagliardo on region fft = direct" + tag,
           rel(gagliardo_on_region(u, disk, 0.8), gagliardo_on_region_direct(u, disk, 0.8)), 1e-9);

    FracParams p = make_params(0.9, 1.5);
    RieszKernel K = make_riesz_kernel(p, g, Normalization::raw);
    VectorField2 a = potential(u, K), b = potential_direct(u, K);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      num += std::norm(a.values()[n] - b.values()[n]);
      den += std::norm(b.values()[n]);
    }
    record("potential fft = direct" + tag, std::sqrt(num / den), 1e-10);

    JacobianField J1 = jacobian(u), J2 = jacobian_divergence_form(u);
    double worst = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < J1.values.size(); ++n) {
      worst = std::max(worst, std::abs(J1.values[n] - J2.values[n]));
      scale = std::max(scale, std::abs(J2.values[n]));
    }
    record("jacobian cell form = edge circulation" + tag, worst / std::max(scale, 1e-300), 1e-10);
  }

  const Grid2 gb = Grid2::square(2.0, 24);
  const Point c = snap_to_cell_center(gb, {0.0, 0.0});
  const auto loop = circle_loop(c, 0.6, 0.5 * gb.h());
  for (int d : {-2, -1, 1, 2, 3}) {
    DegreeResult r = degree(build_block(c, d, gb), loop);
    record("degree of block d=" + std::to_string(d), std::abs(r.degree - d) + r.residual, 0.1);
  }

  const Grid2 gf = Grid2::square(1.0, 16);
  const Mask all(gf.size(), 1);
  const FlatOptions fo{1e-7, 400000};
  {
    FlatInput in(gf, all, FlatVariant::closed, FlatBall::paper);
    in.add_atom({0.0, 0.0}, 1.0);
    FlatNormResult r = flat_norm(in, fo);
    record("flat closed delta = 1", std::abs(r.value - 1.0) + r.primal_dual_gap, 1e-6);
  }
  const double d = 0.5;
  for (FlatBall ball : {FlatBall::paper, FlatBall::simple}) {
    FlatInput in(gf, all, FlatVariant::closed, ball);
    in.add_atom({-0.5 * d, 0.0}, 1.0);
    in.add_atom({0.5 * d, 0.0}, -1.0);
    FlatNormResult r = flat_norm(in, fo);
    const double exact = ball == FlatBall::paper ? 2.0 * d / (2.0 + d) : std::min(d, 2.0);
    record(std::string("flat dipole ") + (ball == FlatBall::paper ? "paper" : "simple") + " ball",
           std::abs(r.value - exact) + r.primal_dual_gap, 1e-6);
  }
  return out;
}

}  // namespace fraclab
