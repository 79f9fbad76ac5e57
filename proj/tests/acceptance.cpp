// Acceptance run: one PASS/FAIL line per criterion with its wall time.
// Exit status 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "fraclab/config.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/flatnorm.hpp"
#include "fraclab/riesz.hpp"
#include "fraclab/topology.hpp"
#include "fraclab/vortex.hpp"
#include "support/lp_oracle.hpp"

using namespace fraclab;
constexpr double pi = std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = dt <= budget_s;
  bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %2d %-28s %8.2fs (budget %.0fs) %s%s\n", pass ? "PASS" : "FAIL", id, name, dt, budget_s,
              o.detail.c_str(), in_time ? "" : " [over budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

std::string source(const std::string& rel) { return std::string(FRACLAB_SOURCE_DIR) + "/" + rel; }

VectorField2 gaussian(const Grid2& g, double support) {
  return sample([](Point p) { return std::exp(-8.0 * (p.x * p.x + p.y * p.y)) * cplx{1.0, p.x}; }, g, support);
}

// Relative L2 mismatch between the direct and FFT fractional gradients on a
// fixed physical lattice of nodes.
double identity_mismatch(int n) {
  Grid2 g = Grid2::square(4.0, n);
  VectorField2 u = gaussian(g, 1.5);
  FracParams p = make_params(0.9, 3.2);
  FracGradField fft = frac_gradient(u, p);
  std::vector<std::size_t> nodes;
  const int step = n / 32;
  for (int j = 0; j < n; j += step)
    for (int i = 0; i < n; i += step)
      if (dist(g.node(i, j), {}) < 1.0) nodes.push_back(g.index(i, j));
  auto direct = frac_gradient_direct(u, p, nodes);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double d = direct[k][a][b], f = fft.values[nodes[k]][a][b];
        num += (d - f) * (d - f);
        den += d * d;
      }
  return std::sqrt(num / den);
}

std::optional<SweepReport> single_sweep;

}  // namespace

int main() {
  criterion(1, "seminorm oracle equivalence", 10, [] {
    Grid2 g = Grid2::square(2.0, 24);
    std::vector<VectorField2> fields;
    fields.push_back(sample([](Point p) { return cplx{std::exp(-4 * (p.x * p.x + p.y * p.y)), 0}; }, g, 0.9));
    fields.push_back(gaussian(g, 0.9));
    fields.push_back(sample([](Point p) { return cplx{std::cos(3 * p.x), std::sin(2 * p.y)}; }, g, 0.9));
    for (int d : {1, 2}) fields.push_back(build_block(snap_to_cell_center(g, {0.1, 0.0}), d, g));
    fields.push_back(sample([](Point p) { return cplx{p.x > 0 ? 1.0 : -1.0, 0}; }, g, 0.7));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    while (fields.size() < 10) {
      VectorField2 r(g, 0.9);
      for (auto& v : r.mutable_values()) v = {nd(rng), nd(rng)};
      r.enforce_support();
      fields.push_back(std::move(r));
    }
    double worst = 0.0;
    for (auto& u : fields) {
      u.enforce_support();
      for (double s : {0.5, 0.9, 0.99}) {
        double a = gagliardo_seminorm(u, s), b = gagliardo_direct(u, s);
        worst = std::max(worst, std::abs(a - b) / b);
      }
    }
    return Outcome{worst < 1e-9, fmt("10 fields x 3 s, worst rel %.2e", worst)};
  });

  criterion(2, "fractional gradient identity", 120, [] {
    double e128 = identity_mismatch(128), e256 = identity_mismatch(256);
    return Outcome{e256 < 1e-2 && e256 < e128, fmt("rel L2 128^2 %.2e", e128) + fmt(", 256^2 %.2e", e256)};
  });

  criterion(3, "BBM consistency", 120, [] {
    Grid2 g = Grid2::square(4.0, 256);
    VectorField2 u = sample([](Point p) { return cplx{std::exp(-4 * (p.x * p.x + p.y * p.y)), 0}; }, g, 1.9);
    double lhs = bbm_weight(0.99) * gagliardo_seminorm(u, 0.99), D = dirichlet_energy(u);
    double rel = std::abs(lhs - D) / D;
    return Outcome{rel < 0.05, fmt("(1-s)c_s[u]^2 = %.5f", lhs) + fmt(", Dirichlet %.5f", D) + fmt(", rel %.3f", rel)};
  });

  criterion(4, "Gamma-limsup intercepts", 45 * 60, [] {
    bool ok = true;
    std::string detail;
    const char* names[] = {"single", "two", "dipole"};
    const char* files[] = {"configs/single_vortex.cfg", "configs/two_vortices.cfg", "configs/dipole.cfg"};
    for (int k = 0; k < 3; ++k) {
      auto t0 = std::chrono::steady_clock::now();
      SweepReport r = run_gamma_sweep(load_config(source(files[k])));
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      bool rows_ok = true;
      for (const auto& row : r.rows) rows_ok = rows_ok && row.ok();
      bool pass = rows_ok && r.intercept_ok && dt <= 15 * 60;
      ok = ok && pass;
      detail += std::string(k ? "; " : "") + names[k] + fmt(" %.3fpi", r.fit.intercept / pi) +
                fmt(" (target %.0fpi", r.expected / pi) + fmt(" +-%.0f%%)", 100 * r.intercept_tol) +
                fmt(" %.0fs", dt) + (pass ? "" : " FAIL");
      if (k == 0) single_sweep = std::move(r);
    }
    return Outcome{ok, detail};
  });

  criterion(5, "lower-bound chain", 600, [] {
    LemmaReport r = run_lower_bound_battery(load_config(source("configs/single_vortex.cfg")));
    std::string d = "random " + std::to_string(r.random_checked - r.random_failed) + "/" +
                    std::to_string(r.random_checked) + ", recovery " +
                    std::to_string(r.recovery_checked - r.recovery_failed) + "/" +
                    std::to_string(r.recovery_checked);
    if (!r.failures.empty()) d += "; first failure: " + r.failures.front();
    return Outcome{r.random_failed == 0 && r.recovery_failed == 0 && r.random_checked == 50, d};
  });

  criterion(6, "flat norm", 300, [] {
    ExperimentConfig cfg = load_config(source("configs/single_vortex.cfg"));
    DomainSpec dom = cfg.domain();
    FlatInput one(dom.grid, dom.omega_closed);
    one.add_atom({0.3, -0.2}, 1.0);
    FlatNormResult a = flat_norm(one, {1e-6, 400000});

    Grid2 g = Grid2::square(1.0, 16);
    double worst_lp = 0.0, worst_gap = a.primal_dual_gap;
    for (FlatBall ball : {FlatBall::paper, FlatBall::simple}) {
      FlatInput in(g, Mask(g.size(), 1), FlatVariant::closed, ball);
      in.add_atom({-0.3125, -0.125}, 1.0);
      in.add_atom({0.1875, 0.25}, -1.0);
      FlatNormResult r = flat_norm(in, {1e-8, 400000});
      double lp = oracle::flat_norm_lp(16, 16, g.h(), in.region, in.mass, ball == FlatBall::paper);
      worst_lp = std::max(worst_lp, std::abs(r.value - lp));
      worst_gap = std::max(worst_gap, r.primal_dual_gap);
    }
    bool pass = std::abs(a.value - 1.0) <= 1e-3 && worst_lp <= 1e-6 && worst_gap <= 1e-6;
    return Outcome{pass, fmt("delta %.6f", a.value) + fmt(", |flat - LP| %.1e", worst_lp) +
                             fmt(", max gap %.1e", worst_gap)};
  });

  criterion(7, "degree", 60, [] {
    Grid2 g = Grid2::square(2.0, 128);
    Point c = snap_to_cell_center(g, {0.05, -0.1});
    bool ok = true;
    double worst_res = 0.0, worst_area = 0.0;
    for (int d : {-2, -1, 1, 2, 3}) {
      VectorField2 u = build_block(c, d, g);
      DegreeResult r = degree(u, circle_loop(c, 0.6, 0.5 * g.h()));
      ok = ok && r.degree == d && r.residual < 0.1;
      worst_res = std::max(worst_res, r.residual);
      VectorField2 t = truncate_cores(u, DiracSum{{{c, d}}}, 0.2);
      double a = area_degree(t, cells_in_disk(g, c, 0.6));
      worst_area = std::max(worst_area, std::abs(a - d));
    }
    ok = ok && worst_area <= 0.2;
    return Outcome{ok, fmt("d in {-2..3}, max residual %.2e", worst_res) + fmt(", max |area - d| %.3f", worst_area)};
  });

  criterion(8, "compactness probe", 600, [] {
    CompactnessReport r = run_compactness_probe(load_config(source("configs/single_vortex.cfg")));
    double worst = 0.0;
    std::string bad;
    for (const auto& row : r.rows) {
      for (double e : row.center_errors) worst = std::max(worst, e / row.tolerance);
      if (!row.error.empty() || !row.localized || !row.degrees_ok) bad += fmt(" s=%g", row.s);
    }
    return Outcome{r.passed(), fmt("max center error / (3h + sqrt(1-s)) %.3f", worst) +
                                   (bad.empty() ? ", degrees = d0 at all t" : ", failing rows:" + bad)};
  });

  criterion(9, "ball scaling of x/|x|", 300, [] {
    auto fits = run_scaling_fits(load_config(source("configs/single_vortex.cfg")));
    bool ok = fits.size() == 2;
    std::string d;
    for (std::size_t k = 0; k < fits.size(); ++k) {
      ok = ok && fits[k].slope_ok && (k == 0 || fits[k].prefactor > fits[k - 1].prefactor);
      d += fmt(" s=%g:", fits[k].s) + fmt(" exponent %.3f", fits[k].fit.slope) + fmt(" prefactor %.3f", fits[k].prefactor);
    }
    return Outcome{ok, d};
  });

  criterion(10, "recovery-field estimates", 600, [] {
    if (!single_sweep) single_sweep = run_gamma_sweep(load_config(source("configs/single_vortex.cfg")));
    const SweepReport& r = *single_sweep;
    // Bounded: no row exceeds twice the ratio of the first row.
    const SweepRow& first = r.rows.front();
    double l2_first = first.l2_defect / std::pow(1 - first.s, 2), grad_first = first.grad_us / log_scale(first.s);
    bool rows_ok = true;
    for (const auto& row : r.rows) rows_ok = rows_ok && row.ok();
    bool ok = rows_ok && std::isfinite(r.max_l2_ratio) && r.max_l2_ratio <= 2 * l2_first &&
              r.max_grad_ratio <= 2 * grad_first && r.flat_decreasing;
    std::string flats;
    for (const auto& row : r.rows) flats += fmt(" %.4f", row.flat_dist);
    return Outcome{ok, fmt("max |u-u_s|^2/(1-s)^2 %.3f", r.max_l2_ratio) +
                           fmt(", max int|grad u_s|^2/|log(1-s)| %.2f", r.max_grad_ratio) + ", flat:" + flats +
                           " (sweep shared with 4)"};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
