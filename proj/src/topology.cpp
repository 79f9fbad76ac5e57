#include "fraclab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/riesz.hpp"

namespace fraclab {

JacobianField::JacobianField(const Grid2& g)
    : grid(g), values(static_cast<std::size_t>(g.nx() - 1) * (g.ny() - 1), 0.0) {}

Point JacobianField::cell_center(int i, int j) const {
  Point p = grid.node(i, j);
  return {p.x + 0.5 * grid.h(), p.y + 0.5 * grid.h()};
}

double JacobianField::integral(const Mask* cells) const {
  CompensatedSum acc;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (!cells || (*cells)[k]) acc.add(values[k]);
  return grid.cell_area() * acc.value();
}

ScalarField JacobianField::as_scalar_field() const {
  const double h = grid.h();
  Grid2 cells({grid.origin().x + 0.5 * h, grid.origin().y + 0.5 * h}, h, cx(), cy());
  ScalarField f(cells);
  f.values = values;
  return f;
}

void write_raster(std::ostream& os, const JacobianField& J) { write_raster(os, J.as_scalar_field()); }

double JacobianField::l1_norm() const {
  CompensatedSum acc;
  for (double v : values) acc.add(std::abs(v));
  return grid.cell_area() * acc.value();
}

CellMask cells_in_disk(const Grid2& g, Point center, double radius) {
  JacobianField probe(g);
  CellMask m(probe.values.size(), 0);
  for (int j = 0; j < probe.cy(); ++j)
    for (int i = 0; i < probe.cx(); ++i) m[probe.index(i, j)] = dist(probe.cell_center(i, j), center) < radius;
  return m;
}

namespace {

// Cell-centered derivatives of a corner-sampled function.
struct CellGrad {
  cplx dx, dy;
};

CellGrad cell_grad(const VectorField2& u, int i, int j) {
  const double h = u.grid().h();
  cplx a = u(i, j), b = u(i + 1, j), c = u(i, j + 1), d = u(i + 1, j + 1);
  return {((b - a) + (d - c)) / (2.0 * h), ((c - a) + (d - b)) / (2.0 * h)};
}

double det(const CellGrad& g) { return g.dx.real() * g.dy.imag() - g.dy.real() * g.dx.imag(); }

}  // namespace

JacobianField jacobian(const VectorField2& u) {
  JacobianField J(u.grid());
  for (int j = 0; j < J.cy(); ++j)
    for (int i = 0; i < J.cx(); ++i) J.at(i, j) = det(cell_grad(u, i, j));
  return J;
}

JacobianField jacobian_divergence_form(const VectorField2& u) {
  JacobianField J(u.grid());
  const double inv = 1.0 / u.grid().cell_area();
  auto edge = [](cplx p, cplx q) { return 0.5 * (p.real() + q.real()) * (q.imag() - p.imag()); };
  for (int j = 0; j < J.cy(); ++j)
    for (int i = 0; i < J.cx(); ++i) {
      cplx a = u(i, j), b = u(i + 1, j), d = u(i + 1, j + 1), c = u(i, j + 1);
      J.at(i, j) = inv * (edge(a, b) + edge(b, d) + edge(d, c) + edge(c, a));
    }
  return J;
}

VectorField2 current(const VectorField2& u) {
  FracGradField g = gradient(u);
  VectorField2 out(u.grid(), u.support_radius());
  auto& v = out.mutable_values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    const cplx w = u.values()[k];
    const Mat2& m = g.values[k];
    v[k] = {w.real() * m[1][0] - w.imag() * m[0][0], w.real() * m[1][1] - w.imag() * m[0][1]};
  }
  return out;
}

JacobianField curl_cells(const VectorField2& j) {
  JacobianField C(j.grid());
  for (int b = 0; b < C.cy(); ++b)
    for (int a = 0; a < C.cx(); ++a) {
      CellGrad g = cell_grad(j, a, b);
      C.at(a, b) = g.dx.imag() - g.dy.real();
    }
  return C;
}

DegreeResult degree(const VectorField2& u, const std::vector<Point>& loop, double c_min) {
  const std::size_t n = loop.size();
  if (n < 3) throw InvalidInput("degree loop needs at least three points");
  std::vector<cplx> e(n);
  DegreeResult r;
  r.min_modulus = INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    cplx v = u.interpolate(loop[k]);
    r.min_modulus = std::min(r.min_modulus, std::abs(v));
    e[k] = v;
  }
  if (r.min_modulus < c_min)
    throw InvalidInput("degree undefined: |u| = " + std::to_string(r.min_modulus) + " on the loop, below " +
                       std::to_string(c_min));
  for (cplx& v : e) v /= std::abs(v);
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    cplx d = 0.5 * (e[(k + 1) % n] - e[(k + n - 1) % n]);
    acc.add(e[k].real() * d.imag() - e[k].imag() * d.real());
  }
  r.winding = acc.value() / (2.0 * std::numbers::pi);
  r.degree = static_cast<int>(std::lround(r.winding));
  r.residual = std::abs(r.winding - r.degree);
  if (r.residual >= 0.1)
    throw DegreeError("winding quadrature residual " + std::to_string(r.residual) + " (loop under-resolved)");
  return r;
}

double area_degree(const VectorField2& u, const CellMask& cells) {
  return jacobian(u).integral(&cells) / std::numbers::pi;
}

double jacobian_flat_distance_bound(const VectorField2& v, const VectorField2& w) {
  auto grad_norm = [](const VectorField2& f) {
    FracGradField g = gradient(f);
    CompensatedSum acc;
    for (const Mat2& m : g.values) acc.add(frobenius_sq(m));
    return std::sqrt(f.grid().cell_area() * acc.value());
  };
  return std::sqrt(l2_norm(v - w)) * (grad_norm(v) + grad_norm(w));
}

JacobianField jacobian_difference_identity(const VectorField2& v, const VectorField2& w) {
  const Grid2& g = v.grid();
  std::vector<cplx> a(g.size()), b(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    cplx p = v.values()[k], q = w.values()[k];
    a[k] = {p.real() - q.real(), p.imag() + q.imag()};
    b[k] = {p.real() + q.real(), p.imag() - q.imag()};
  }
  JacobianField ja = jacobian(VectorField2(g, std::move(a), INFINITY));
  JacobianField jb = jacobian(VectorField2(g, std::move(b), INFINITY));
  for (std::size_t k = 0; k < ja.values.size(); ++k) ja.values[k] = 0.5 * (ja.values[k] + jb.values[k]);
  return ja;
}

}  // namespace fraclab
