#include "fraclab/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fraclab {

Grid2::Grid2(Point origin, double h, int nx, int ny) : origin_(origin), h_(h), nx_(nx), ny_(ny) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("grid spacing must be positive");
  if (nx < 2 || ny < 2) throw InvalidInput("grid needs at least 2 nodes per axis");
}

Grid2 Grid2::square(double side, int n, Point center) {
  if (n < 2) throw InvalidInput("grid needs at least 2 nodes per axis");
  double h = side / n;
  return Grid2({center.x - (n / 2) * h, center.y - (n / 2) * h}, h, n, n);
}

VectorField2::VectorField2(const Grid2& g, double support_radius)
    : grid_(g), values_(g.size(), cplx{}), support_radius_(support_radius) {}

VectorField2::VectorField2(const Grid2& g, std::vector<cplx> values, double support_radius)
    : grid_(g), values_(std::move(values)), support_radius_(support_radius) {
  if (values_.size() != g.size()) throw InvalidInput("field size does not match grid");
  for (const cplx& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidInput("non-finite field value");
}

void VectorField2::enforce_support() {
  Point c = grid_.center();
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i)
      if (dist(grid_.node(i, j), c) > support_radius_) values_[grid_.index(i, j)] = 0.0;
}

VectorField2 VectorField2::scaled(double a) const {
  VectorField2 r = *this;
  for (cplx& v : r.values_) v *= a;
  return r;
}

VectorField2 operator+(const VectorField2& a, const VectorField2& b) {
  if (!(a.grid_ == b.grid_)) throw InvalidInput("fields live on different grids");
  VectorField2 r(a.grid_, std::max(a.support_radius_, b.support_radius_));
  for (std::size_t k = 0; k < r.values_.size(); ++k) r.values_[k] = a.values_[k] + b.values_[k];
  return r;
}

VectorField2 operator-(const VectorField2& a, const VectorField2& b) {
  if (!(a.grid_ == b.grid_)) throw InvalidInput("fields live on different grids");
  VectorField2 r(a.grid_, std::max(a.support_radius_, b.support_radius_));
  for (std::size_t k = 0; k < r.values_.size(); ++k) r.values_[k] = a.values_[k] - b.values_[k];
  return r;
}

double VectorField2::sup_norm() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

cplx VectorField2::interpolate(Point p) const {
  double fx = (p.x - grid_.origin().x) / grid_.h();
  double fy = (p.y - grid_.origin().y) / grid_.h();
  int i = static_cast<int>(std::floor(fx));
  int j = static_cast<int>(std::floor(fy));
  double tx = fx - i, ty = fy - j;
  auto at = [&](int a, int b) -> cplx { return grid_.contains_index(a, b) ? (*this)(a, b) : cplx{}; };
  return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
         tx * ty * at(i + 1, j + 1);
}

VectorField2 sample(const PlaneMap& f, const Grid2& grid, double support_radius) {
  VectorField2 u(grid, support_radius);
  Point c = grid.center();
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      Point p = grid.node(i, j);
      if (dist(p, c) > support_radius) continue;
      cplx v = f(p);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream msg;
        msg << "non-finite sample at node (" << i << ", " << j << ")";
        throw InvalidInput(msg.str());
      }
      u(i, j) = v;
    }
  return u;
}

Mask DomainSpec::omega_tilde() const {
  Mask m(grid.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = omega[k] || neighborhood[k];
  return m;
}

std::vector<Point> circle_loop(Point center, double radius, double max_spacing) {
  int n = std::max(16, static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / max_spacing)));
  std::vector<Point> loop(n);
  for (int k = 0; k < n; ++k) {
    double t = 2.0 * std::numbers::pi * k / n;
    loop[k] = {center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
  }
  return loop;
}

std::vector<Point> DomainSpec::dilated_boundary(double t) const {
  return circle_loop(center, radius + t, 0.5 * grid.h());
}

DomainSpec DomainSpec::disk(const Grid2& grid, Point center, double radius, double band, double R, int d0) {
  if (!(radius > 0.0) || !(band > 0.0)) throw InvalidInput("disk radius and band must be positive");
  DomainSpec d{grid, Mask(grid.size()), Mask(grid.size()), Mask(grid.size()), {}, R, d0, center, radius, band};
  const double lo_x = grid.origin().x, hi_x = grid.node(grid.nx() - 1, 0).x;
  const double lo_y = grid.origin().y, hi_y = grid.node(0, grid.ny() - 1).y;
  double outer = radius + band;
  if (center.x - outer <= lo_x || center.x + outer >= hi_x || center.y - outer <= lo_y || center.y + outer >= hi_y)
    throw InvalidInput("Omega~ must lie in the grid interior");
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      double r = dist(grid.node(i, j), center);
      std::size_t k = grid.index(i, j);
      d.omega[k] = r < radius;
      d.omega_closed[k] = r <= radius;
      d.neighborhood[k] = std::abs(r - radius) < band;
    }
  d.boundary = circle_loop(center, radius, grid.h());
  return d;
}

S1Report check_s1_constraint(const VectorField2& u, const Mask& region, double tol) {
  S1Report rep;
  for (std::size_t k = 0; k < region.size(); ++k) {
    if (!region[k]) continue;
    double e = std::abs(std::abs(u.values()[k]) - 1.0);
    rep.max_modulus_error = std::max(rep.max_modulus_error, e);
    if (e > tol) rep.offending_nodes.push_back(k);
  }
  rep.passed = rep.offending_nodes.empty();
  return rep;
}

S1Report check_s1_constraint(const VectorField2& u, const DomainSpec& dom, double tol) {
  return check_s1_constraint(u, dom.omega, tol);
}

double l2_norm(const VectorField2& u, const Mask* mask) {
  CompensatedSum acc;
  const auto& v = u.values();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!mask || (*mask)[k]) acc.add(std::norm(v[k]));
  return u.grid().cell_area() * acc.value();
}

namespace {

void write_header(std::ostream& os, const Grid2& g, int ncomp) {
  os << "VF2 " << ncomp << "\n" << g.nx() << "\n" << g.ny() << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", g.h());
  os << buf << "\n";
  std::snprintf(buf, sizeof buf, "%.17g %.17g", g.origin().x, g.origin().y);
  os << buf << "\n";
}

void write_doubles(std::ostream& os, const double* data, std::size_t n) {
  static_assert(std::endian::native == std::endian::little, "raster format is little-endian");
  os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

Grid2 read_header(std::istream& is, int expected_components) {
  std::string line;
  std::getline(is, line);
  std::istringstream magic(line);
  std::string tag;
  int ncomp = 0;
  magic >> tag >> ncomp;
  if (tag != "VF2") throw InvalidInput("raster: bad magic");
  if (ncomp != expected_components) throw InvalidInput("raster: unexpected component count");
  int nx = 0, ny = 0;
  double h = 0, ox = 0, oy = 0;
  std::getline(is, line);
  nx = std::stoi(line);
  std::getline(is, line);
  ny = std::stoi(line);
  std::getline(is, line);
  h = std::stod(line);
  std::getline(is, line);
  std::istringstream org(line);
  org >> ox >> oy;
  return Grid2({ox, oy}, h, nx, ny);
}

}  // namespace

void write_raster(std::ostream& os, const VectorField2& u) {
  write_header(os, u.grid(), 2);
  write_doubles(os, reinterpret_cast<const double*>(u.values().data()), 2 * u.values().size());
}

void write_raster(std::ostream& os, const ScalarField& f) {
  write_header(os, f.grid, 1);
  write_doubles(os, f.values.data(), f.values.size());
}

VectorField2 read_vector_raster(std::istream& is, double support_radius) {
  Grid2 g = read_header(is, 2);
  std::vector<cplx> v(g.size());
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(2 * v.size() * sizeof(double)));
  if (!is) throw InvalidInput("raster: truncated data");
  return VectorField2(g, std::move(v), support_radius);
}

ScalarField read_scalar_raster(std::istream& is) {
  ScalarField f(read_header(is, 1));
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!is) throw InvalidInput("raster: truncated data");
  return f;
}

void write_mask_csv(std::ostream& os, const Grid2& g, const Mask& m) {
  os << "i,j,x,y,value\n";
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      Point p = g.node(i, j);
      os << i << ',' << j << ',' << p.x << ',' << p.y << ',' << int(m[g.index(i, j)]) << '\n';
    }
}

}  // namespace fraclab
