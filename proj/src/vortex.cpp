#include "fraclab/vortex.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fraclab {

namespace {

cplx unit_power(cplx z, int d) {
  const double m = std::abs(z);
  cplx e = m > 0.0 ? z / m : cplx{1.0, 0.0};
  if (d < 0) e = std::conj(e);
  cplx out{1.0, 0.0};
  for (int k = 0; k < std::abs(d); ++k) out *= e;
  return out;
}

cplx to_c(Point p) { return {p.x, p.y}; }

constexpr double kDefaultSupportFactor = 1.5;

std::size_t nearest_node(const Grid2& g, Point p) {
  int i = static_cast<int>(std::lround((p.x - g.origin().x) / g.h()));
  int j = static_cast<int>(std::lround((p.y - g.origin().y) / g.h()));
  if (!g.contains_index(i, j)) return g.size();
  return g.index(i, j);
}

// Solves the 5-point Laplace equation on the masked nodes with the given
// values on every other node (conjugate gradients, fixed order).
std::vector<double> harmonic_extension(const Grid2& g, const Mask& unknown, std::vector<double> values) {
  const int nx = g.nx(), ny = g.ny();
  std::vector<std::size_t> ids;
  std::vector<int> slot(g.size(), -1);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (unknown[k]) {
      int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1)
        throw InvalidInput("harmonic region touches the grid edge");
      slot[k] = static_cast<int>(ids.size());
      ids.push_back(k);
    }
  const std::size_t n = ids.size();
  if (n == 0) return values;
  const std::ptrdiff_t off[4] = {1, -1, nx, -nx};
  std::vector<double> b(n, 0.0), x(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::ptrdiff_t o : off) {
      std::size_t nb = ids[a] + o;
      if (slot[nb] < 0) b[a] += values[nb];
    }
    x[a] = 0.0;
  }
  auto apply = [&](const std::vector<double>& p, std::vector<double>& out) {
    for (std::size_t a = 0; a < n; ++a) {
      double v = 4.0 * p[a];
      for (std::ptrdiff_t o : off) {
        int sl = slot[ids[a] + o];
        if (sl >= 0) v -= p[sl];
      }
      out[a] = v;
    }
  };
  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    CompensatedSum s;
    for (std::size_t k = 0; k < u.size(); ++k) s.add(u[k] * v[k]);
    return s.value();
  };
  std::vector<double> r = b, p = b, Ap(n);
  double rr = dot(r, r);
  const double stop = 1e-20 * std::max(dot(b, b), 1e-300);
  const std::size_t max_iter = 20 * n + 100;
  std::size_t it = 0;
  while (rr > stop && it < max_iter) {
    apply(p, Ap);
    double alpha = rr / dot(p, Ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    double rr2 = dot(r, r);
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + rr2 / rr * p[k];
    rr = rr2;
    ++it;
  }
  if (rr > stop) throw std::runtime_error("harmonic phase solve did not converge");
  for (std::size_t a = 0; a < n; ++a) values[ids[a]] = x[a];
  return values;
}

}  // namespace

int DiracSum::total_degree() const {
  int t = 0;
  for (const Atom& a : atoms) t += a.d;
  return t;
}

int DiracSum::total_variation() const {
  int t = 0;
  for (const Atom& a : atoms) t += std::abs(a.d);
  return t;
}

bool DiracSum::in_open(const DomainSpec& dom) const {
  return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) {
    std::size_t k = nearest_node(dom.grid, a.x);
    return a.d != 0 && k < dom.grid.size() && dom.omega[k];
  });
}

bool DiracSum::in_closed(const DomainSpec& dom) const {
  return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) {
    std::size_t k = nearest_node(dom.grid, a.x);
    return a.d != 0 && k < dom.grid.size() && dom.omega_closed[k];
  });
}

void RecoveryConfig::validate(const DomainSpec& dom) const {
  if (!(s > 0.0 && s < 1.0)) throw InvalidInput("s must lie in (0, 1)");
  if (mu.atoms.empty()) return;
  double limit = INFINITY;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& a = mu.atoms[i];
    if (a.d == 0) throw InvalidInput("atoms must carry nonzero degree");
    limit = std::min(limit, dom.radius - dist(a.x, dom.center));
    for (std::size_t j = i + 1; j < mu.atoms.size(); ++j) limit = std::min(limit, 0.5 * dist(a.x, mu.atoms[j].x));
  }
  if (!(r < limit)) throw InvalidInput("r must be below the distance to dOmega and half the atom separation");
  if (!(core_radius() < r)) throw InvalidInput("core radius 1 - s must be below r");
}

Point snap_to_cell_center(const Grid2& g, Point p) {
  const double h = g.h();
  double i = std::floor((p.x - g.origin().x) / h), j = std::floor((p.y - g.origin().y) / h);
  return {g.origin().x + (i + 0.5) * h, g.origin().y + (j + 0.5) * h};
}

DiracSum snap_atoms(const DiracSum& mu, const Grid2& g) {
  DiracSum out = mu;
  for (Atom& a : out.atoms) a.x = snap_to_cell_center(g, a.x);
  return out;
}

VectorField2 build_block(Point center, int d, const Grid2& grid) {
  if (d == 0) throw InvalidInput("vortex block needs nonzero degree");
  const cplx c = to_c(center);
  const double reach = 0.5 * std::hypot(grid.nx(), grid.ny()) * grid.h() + dist(center, grid.center());
  VectorField2 u(grid, reach);
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) u(i, j) = unit_power(to_c(grid.node(i, j)) - c, d);
  return u;
}

VectorField2 build_boundary_datum(const DomainSpec& dom, int d0, double support) {
  const double flat = dom.radius + dom.band;
  if (support <= 0.0) support = kDefaultSupportFactor * flat;
  if (!(support > flat)) throw InvalidInput("datum support must exceed radius + band");
  const double span = std::log(support / flat);
  const cplx c = to_c(dom.center);
  VectorField2 u(dom.grid, support + dist(dom.center, dom.grid.center()));
  for (int j = 0; j < dom.grid.ny(); ++j)
    for (int i = 0; i < dom.grid.nx(); ++i) {
      cplx z = to_c(dom.grid.node(i, j)) - c;
      double rho = std::abs(z);
      if (rho >= support) continue;
      // Harmonic (capacity-minimising) profile between the two radii.
      double chi = rho <= flat ? 1.0 : 1.0 - std::log(rho / flat) / span;
      u(i, j) = chi * (d0 == 0 ? cplx{1.0, 0.0} : unit_power(z, d0));
    }
  return u;
}

VectorField2 build_admissible(const RecoveryConfig& cfg, const DomainSpec& dom, bool match_boundary) {
  cfg.validate(dom);
  const int total = cfg.mu.total_degree();
  if (match_boundary && total != dom.d0)
    throw InvalidInput("total degree " + std::to_string(total) + " differs from the boundary degree " +
                       std::to_string(dom.d0));
  const Grid2& g = dom.grid;
  const DiracSum mu = snap_atoms(cfg.mu, g);
  // Without matching, glue to the datum of the atoms' total degree instead.
  VectorField2 u = build_boundary_datum(dom, match_boundary ? dom.d0 : total);
  if (mu.atoms.empty()) return u;

  // Phase of u0 / prod_i u_i on the exterior nodes: sum_i d_i Arg((x - c)/(x - x_i)),
  // continuous there because every atom lies inside Omega.
  const cplx c = to_c(dom.center);
  std::vector<double> psi(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (dom.omega[k]) continue;
    cplx x = to_c(g.node(static_cast<int>(k % g.nx()), static_cast<int>(k / g.nx())));
    double ph = 0.0;
    for (const Atom& a : mu.atoms) ph += a.d * std::arg((x - c) / (x - to_c(a.x)));
    psi[k] = ph;
  }
  psi = harmonic_extension(g, dom.omega, std::move(psi));
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      std::size_t k = g.index(i, j);
      if (!dom.omega[k]) continue;
      cplx x = to_c(g.node(i, j));
      cplx v = std::polar(1.0, psi[k]);
      for (const Atom& a : mu.atoms) v *= unit_power(x - to_c(a.x), a.d);
      u(i, j) = v;
    }
  return u;
}

VectorField2 truncate_cores(const VectorField2& u, const DiracSum& mu, double core) {
  const Grid2& g = u.grid();
  VectorField2 out = u;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      double f = 1.0;
      for (const Atom& a : mu.atoms) f *= std::min(dist(g.node(i, j), a.x) / core, 1.0);
      out(i, j) *= f;
    }
  return out;
}

RecoveryPair build_recovery(const RecoveryConfig& cfg, const DomainSpec& dom) {
  DiracSum mu = snap_atoms(cfg.mu, dom.grid);
  VectorField2 u = build_admissible(cfg, dom);
  VectorField2 us = truncate_cores(u, mu, cfg.core_radius());
  VectorField2 comp = truncate_cores(u, mu, std::sqrt(1.0 - cfg.s));
  return {std::move(u), std::move(us), std::move(comp), std::move(mu)};
}

DiracSum split_charges(const DiracSum& mu, double delta) {
  if (!(delta > 0.0)) throw InvalidInput("split distance must be positive");
  DiracSum out;
  for (const Atom& a : mu.atoms) {
    const int n = std::abs(a.d);
    const int sign = a.d > 0 ? 1 : -1;
    for (int k = 0; k < n; ++k) out.atoms.push_back({{a.x.x + delta * (k - 0.5 * (n - 1)), a.x.y}, sign});
  }
  return out;
}

}  // namespace fraclab
