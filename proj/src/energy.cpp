#include "fraclab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/fft.hpp"
#include "fraclab/riesz.hpp"

namespace fraclab {

namespace {

constexpr int kQuadraticRing = 3;

void check_s(double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("s must lie in (0, 1)");
}

int grid_extent(const Grid2& g) { return std::max(g.nx(), g.ny()) - 1; }

// ||u - tau_z u||^2 for every offset, from one autocorrelation.
struct ShiftNorms {
  int nx, ny;
  std::vector<double> S;  // (2nx-1) x (2ny-1), row-major by zy
  double at(int zx, int zy) const {
    return S[static_cast<std::size_t>(zy + ny - 1) * (2 * nx - 1) + (zx + nx - 1)];
  }
};

ShiftNorms whole_plane_shift_norms(const VectorField2& u) {
  const Grid2& g = u.grid();
  auto C = fft_correlate(u.values(), u.values(), g.nx(), g.ny());
  const double norm2 = l2_norm(u) / g.cell_area();
  ShiftNorms r{g.nx(), g.ny(), std::vector<double>(C.size())};
  for (std::size_t k = 0; k < C.size(); ++k) r.S[k] = g.cell_area() * std::max(0.0, 2.0 * norm2 - 2.0 * C[k].real());
  return r;
}

ShiftNorms region_shift_norms(const VectorField2& u, const Mask& region) {
  const Grid2& g = u.grid();
  std::vector<cplx> ind(g.size()), amp(g.size()), v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!region[k]) continue;
    ind[k] = 1.0;
    amp[k] = std::norm(u.values()[k]);
    v[k] = u.values()[k];
  }
  auto c1 = fft_correlate(ind, amp, g.nx(), g.ny());
  auto c2 = fft_correlate(amp, ind, g.nx(), g.ny());
  auto c3 = fft_correlate(v, v, g.nx(), g.ny());
  ShiftNorms r{g.nx(), g.ny(), std::vector<double>(c1.size())};
  for (std::size_t k = 0; k < c1.size(); ++k)
    r.S[k] = g.cell_area() * std::max(0.0, c1[k].real() + c2[k].real() - 2.0 * c3[k].real());
  return r;
}

// Sums w(z) S(z) over the offsets, split at the cutoff. The diagonal cell
// is reported through `diag_term`.
GagliardoSplit sum_offsets(const ShiftNorms& sn, const GagliardoWeights& gw, double cutoff, double beyond_value) {
  const int K = gw.w.K;
  const double h = gw.h;
  CompensatedSum near, tail;
  for (int zy = -K; zy <= K; ++zy)
    for (int zx = -K; zx <= K; ++zx) {
      if (zx == 0 && zy == 0) continue;
      double S = (std::abs(zx) < sn.nx && std::abs(zy) < sn.ny) ? sn.at(zx, zy) : beyond_value;
      double term = gw.w.at(zx, zy) * S;
      if (h * std::hypot(zx, zy) < cutoff)
        near.add(term);
      else
        tail.add(term);
    }
  double diag = 0.5 * gw.diagonal * (sn.at(1, 0) + sn.at(0, 1)) / (h * h);
  near.add(diag);
  tail.add(gw.outside * beyond_value);
  GagliardoSplit r;
  r.near = near.value();
  r.tail = tail.value();
  r.total = r.near + r.tail;
  return r;
}

}  // namespace

GagliardoWeights make_gagliardo_weights(double s, double h, int K) {
  check_s(s);
  GagliardoWeights gw;
  gw.s = s;
  gw.h = h;
  const double p = 2.0 + 2.0 * s;
  const double scale = std::pow(h, -2.0 * s);
  gw.w = symmetric_table(K, [&](int i, int j) {
    if (i == 0 && j == 0) return 0.0;
    if (std::max(std::abs(i), std::abs(j)) <= kQuadraticRing)
      return scale * cell_power_integral(i, j, 2.0 * s) / (i * i + j * j);
    return scale * cell_power_integral(i, j, p);
  });
  gw.diagonal = std::pow(h, 2.0 - 2.0 * s) * singular_cell_integral(2.0 * s);
  gw.outside = outside_square_integral(p, (K + 0.5) * h);
  return gw;
}

GagliardoSplit gagliardo_split(const VectorField2& u, double s, double cutoff) {
  check_s(s);
  const Grid2& g = u.grid();
  if (cutoff < g.h()) throw InvalidInput("seminorm cutoff below the grid spacing selects no pairs");
  GagliardoWeights gw = make_gagliardo_weights(s, g.h(), grid_extent(g));
  return sum_offsets(whole_plane_shift_norms(u), gw, cutoff, 2.0 * l2_norm(u));
}

double gagliardo_seminorm(const VectorField2& u, double s, std::optional<double> cutoff) {
  if (cutoff) return gagliardo_split(u, s, *cutoff).near;
  check_s(s);
  const Grid2& g = u.grid();
  GagliardoWeights gw = make_gagliardo_weights(s, g.h(), grid_extent(g));
  return sum_offsets(whole_plane_shift_norms(u), gw, 0.0, 2.0 * l2_norm(u)).total;
}

double gagliardo_direct(const VectorField2& u, double s) {
  check_s(s);
  const Grid2& g = u.grid();
  const double h = g.h(), a = g.cell_area();
  GagliardoWeights gw = make_gagliardo_weights(s, h, grid_extent(g));
  CompensatedSum wall;
  for (int zy = -gw.w.K; zy <= gw.w.K; ++zy)
    for (int zx = -gw.w.K; zx <= gw.w.K; ++zx) wall.add(gw.w.at(zx, zy));
  const double w_total = wall.value() + gw.outside;
  const int nx = g.nx(), ny = g.ny();
  CompensatedSum pairs;
  for (int yj = 0; yj < ny; ++yj)
    for (int yi = 0; yi < nx; ++yi) {
      const cplx ux = u(yi, yj);
      double in_grid = 0.0;
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          if (i == yi && j == yj) continue;
          double w = gw.w.at(i - yi, j - yj);
          in_grid += w;
          pairs.add(a * w * std::norm(ux - u(i, j)));
        }
      // Partners off the grid, where u = 0; counted in both orders.
      pairs.add(2.0 * a * std::norm(ux) * (w_total - in_grid));
    }
  pairs.add(0.5 * gw.diagonal * dirichlet_energy(u));
  return pairs.value();
}

double gagliardo_on_region(const VectorField2& u, const Mask& region, double s, std::optional<double> cutoff) {
  check_s(s);
  const Grid2& g = u.grid();
  if (cutoff && *cutoff < g.h()) throw InvalidInput("seminorm cutoff below the grid spacing selects no pairs");
  GagliardoWeights gw = make_gagliardo_weights(s, g.h(), grid_extent(g));
  gw.outside = 0.0;
  GagliardoSplit r = sum_offsets(region_shift_norms(u, region), gw, cutoff.value_or(0.0), 0.0);
  return cutoff ? r.near : r.total;
}

double gagliardo_on_region_direct(const VectorField2& u, const Mask& region, double s) {
  check_s(s);
  const Grid2& g = u.grid();
  GagliardoWeights gw = make_gagliardo_weights(s, g.h(), grid_extent(g));
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (region[k]) nodes.push_back(k);
  CompensatedSum acc;
  const int nx = g.nx();
  for (std::size_t x : nodes)
    for (std::size_t y : nodes) {
      if (x == y) continue;
      int zx = static_cast<int>(y % nx) - static_cast<int>(x % nx);
      int zy = static_cast<int>(y / nx) - static_cast<int>(x / nx);
      acc.add(g.cell_area() * gw.w.at(zx, zy) * std::norm(u.values()[x] - u.values()[y]));
    }
  acc.add(0.5 * gw.diagonal * dirichlet_energy(u, &region));
  return acc.value();
}

double dirichlet_energy(const VectorField2& u, const Mask* region) {
  const Grid2& g = u.grid();
  CompensatedSum acc;
  auto in = [&](int i, int j) { return !region || (*region)[g.index(i, j)]; };
  // Edges leaving the grid see u = 0 outside, matching the whole-plane shifts.
  for (int j = -1; j < g.ny(); ++j)
    for (int i = -1; i < g.nx(); ++i) {
      bool here = g.contains_index(i, j);
      cplx a = here ? u(i, j) : cplx{};
      if (j >= 0 && (g.contains_index(i + 1, j) || here)) {
        bool keep = region ? (here && g.contains_index(i + 1, j) && in(i, j) && in(i + 1, j)) : true;
        cplx b = g.contains_index(i + 1, j) ? u(i + 1, j) : cplx{};
        if (keep) acc.add(std::norm(b - a));
      }
      if (i >= 0 && (g.contains_index(i, j + 1) || here)) {
        bool keep = region ? (here && g.contains_index(i, j + 1) && in(i, j) && in(i, j + 1)) : true;
        cplx b = g.contains_index(i, j + 1) ? u(i, j + 1) : cplx{};
        if (keep) acc.add(std::norm(b - a));
      }
    }
  return acc.value();
}

double dirichlet_energy_centered(const VectorField2& u, const Mask* region) {
  FracGradField gr = gradient(u);
  CompensatedSum acc;
  for (std::size_t k = 0; k < gr.values.size(); ++k)
    if (!region || (*region)[k]) acc.add(frobenius_sq(gr.values[k]));
  return u.grid().cell_area() * acc.value();
}

GLTerms ginzburg_landau(const VectorField2& v, double eps, double C_pot, const Mask& region) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidInput("eps must lie in (0, 1)");
  const double le = std::abs(std::log(eps));
  CompensatedSum pot;
  for (std::size_t k = 0; k < region.size(); ++k)
    if (region[k]) {
      double m = std::norm(v.values()[k]) - 1.0;
      pot.add(m * m);
    }
  GLTerms t;
  t.dirichlet = dirichlet_energy_centered(v, &region) / le;
  t.potential = C_pot / (eps * eps * le) * v.grid().cell_area() * pot.value();
  return t;
}

EnergyBreakdown f_s(const VectorField2& u, const FracParams& params, std::optional<double> r_s,
                    const Mask* gl_region) {
  EnergyBreakdown e;
  e.params = params;
  e.r_s = r_s.value_or(std::sqrt(1.0 - params.s));
  GagliardoSplit sp = gagliardo_split(u, params.s, std::max(e.r_s, u.grid().h()));
  e.gagliardo = sp.total;
  e.gagliardo_near = sp.near;
  e.gagliardo_tail = sp.tail;
  e.F_s = params.bbm_weight() / log_scale(params.s) * sp.total;
  if (gl_region) {
    VectorField2 v = potential(u, params, Normalization::normalized);
    GLTerms gl = ginzburg_landau(v, params.eps, params.c_prime_s, *gl_region);
    e.gl_dirichlet = gl.dirichlet;
    e.gl_potential = gl.potential;
  }
  return e;
}

bool LowerBoundReport::passed() const {
  if (!first_holds || !second_holds) return false;
  return std::all_of(chain.begin(), chain.end(), [](const ChainCheck& c) { return c.holds; });
}

std::string LowerBoundReport::describe() const {
  std::ostringstream os;
  os << "potential estimate: " << left << " <= " << middle << " <= " << right << " (tol " << tolerance << ")";
  for (const ChainCheck& c : chain) os << "; eta=" << c.eta << ": F_s=" << c.F_s << " >= " << c.gl_bound;
  return os.str();
}

LowerBoundReport lower_bound_check(const VectorField2& u, const FracParams& params, const DomainSpec& dom,
                                   const std::vector<double>& etas) {
  const Grid2& g = u.grid();
  const double s = params.s, R = params.R, a = g.cell_area();
  const Mask region = dom.omega_tilde();
  VectorField2 v = potential(u, params, Normalization::normalized);
  const double sup = u.sup_norm();

  CompensatedSum left, diff;
  double vmax = 0.0;
  for (std::size_t k = 0; k < region.size(); ++k) {
    if (!region[k]) continue;
    double m = std::norm(v.values()[k]) - 1.0;
    left.add(m * m);
    diff.add(std::norm(u.values()[k] - v.values()[k]));
    vmax = std::max(vmax, std::abs(v.values()[k]));
  }
  const double gag = gagliardo_seminorm(u, s);
  LowerBoundReport rep;
  rep.left = a * left.value();
  rep.middle = 4.0 * sup * sup * a * diff.value();
  rep.right = sup * sup * (1.0 - s) * (1.0 - s) * std::pow(R, 2.0 * s - 1.0) / std::numbers::pi * gag;
  rep.right_cs = rep.right * R;
  // |I~u| may exceed ||u||_inf by the discretisation error of the kernel
  // mass; the pointwise bound |I~u + u| <= 2||u||_inf loosens accordingly.
  const double delta = sup > 0.0 ? std::max(0.0, vmax / sup - 1.0) : 0.0;
  rep.tolerance = ((2.0 + delta) * (2.0 + delta) / 4.0 - 1.0) * rep.middle + 1e-12;
  rep.first_holds = rep.left <= rep.middle + rep.tolerance;
  rep.second_holds = rep.middle <= rep.right + 1e-12;

  const double F = params.bbm_weight() / log_scale(s) * gag;
  const double grad_sq = dirichlet_energy_centered(v, &region);
  for (double eta : etas) {
    if (!(eta > 0.0 && eta < 1.0)) throw InvalidInput("eta must lie in (0, 1)");
    ChainCheck c;
    c.eta = eta;
    c.F_s = F;
    c.gl_bound = (1.0 - eta) * params.c_dprime_s / log_scale(s) * grad_sq +
                 eta * params.c_prime_s / ((1.0 - s) * log_scale(s)) * rep.left;
    c.holds = c.F_s >= c.gl_bound;
    rep.chain.push_back(c);
  }
  return rep;
}

}  // namespace fraclab
