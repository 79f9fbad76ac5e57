#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab {

using cplx = std::complex<double>;

/// Planar point / 2-vector. Vector fields store their samples as complex
/// numbers (u = u1 + i u2), which keeps the vortex algebra and the FFT paths
/// free of component bookkeeping.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform node-centered grid: node(i, j) = origin + (i h, j h).
class Grid2 {
 public:
  Grid2(Point origin, double h, int nx, int ny);

  /// n x n nodes with spacing side/n; node (n/2, n/2) sits on `center`.
  static Grid2 square(double side, int n, Point center = {});

  Point origin() const { return origin_; }
  double h() const { return h_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  Point node(int i, int j) const { return {origin_.x + i * h_, origin_.y + j * h_}; }
  /// Anchor node (nx/2, ny/2); supports and domains are measured from it.
  Point center() const { return node(nx_ / 2, ny_ / 2); }
  bool contains_index(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  double cell_area() const { return h_ * h_; }

  bool operator==(const Grid2& o) const {
    return origin_.x == o.origin_.x && origin_.y == o.origin_.y && h_ == o.h_ && nx_ == o.nx_ && ny_ == o.ny_;
  }

 private:
  Point origin_;
  double h_;
  int nx_, ny_;
};

using Mask = std::vector<unsigned char>;

/// Per-node scalar samples on a grid.
struct ScalarField {
  Grid2 grid;
  std::vector<double> values;

  explicit ScalarField(const Grid2& g) : grid(g), values(g.size(), 0.0) {}
  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// R^2-valued samples, zero outside the ball of radius support_radius about
/// the grid center.
class VectorField2 {
 public:
  VectorField2(const Grid2& g, double support_radius);
  VectorField2(const Grid2& g, std::vector<cplx> values, double support_radius);

  const Grid2& grid() const { return grid_; }
  double support_radius() const { return support_radius_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& mutable_values() { return values_; }
  cplx operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  cplx& operator()(int i, int j) { return values_[grid_.index(i, j)]; }

  /// Zero every sample outside the support ball.
  void enforce_support();

  VectorField2 scaled(double a) const;
  friend VectorField2 operator+(const VectorField2& a, const VectorField2& b);
  friend VectorField2 operator-(const VectorField2& a, const VectorField2& b);

  /// Largest |u| over the nodes where u is nonzero.
  double sup_norm() const;
  /// Bilinear interpolation; zero outside the grid.
  cplx interpolate(Point p) const;

 private:
  Grid2 grid_;
  std::vector<cplx> values_;
  double support_radius_;
};

using PlaneMap = std::function<cplx(Point)>;

/// Nodewise evaluation of f, forced to zero outside support_radius.
/// Throws InvalidInput if f is non-finite at any node inside the support.
VectorField2 sample(const PlaneMap& f, const Grid2& grid, double support_radius);

/// Domain geometry: Omega, the band U around its boundary, Omega~ = Omega u U.
struct DomainSpec {
  Grid2 grid;
  Mask omega;          // x in Omega (open)
  Mask omega_closed;   // x in closure of Omega
  Mask neighborhood;   // x in U
  std::vector<Point> boundary;  // counterclockwise loop approximating dOmega
  double R = 0.0;               // kernel radius
  int d0 = 0;
  // Disk geometry (the default domain); used by analytic oracles.
  Point center;
  double radius = 1.0;
  double band = 0.25;  // U = { x : dist(x, dOmega) < band }

  Mask omega_tilde() const;
  /// dOmega_t = { dist(x, Omega) = t } as a counterclockwise polyline.
  std::vector<Point> dilated_boundary(double t) const;

  /// Disk Omega = B_radius(center) with U the band of half-width `band`.
  /// Throws InvalidInput if Omega~ leaves the grid interior.
  static DomainSpec disk(const Grid2& grid, Point center, double radius, double band, double R, int d0);
};

/// Counterclockwise circle polyline with spacing <= max_spacing.
std::vector<Point> circle_loop(Point center, double radius, double max_spacing);

struct S1Report {
  double max_modulus_error = 0.0;
  std::vector<std::size_t> offending_nodes;
  bool passed = true;
};

/// Worst | |u| - 1 | over Omega nodes; nodes with error > tol are listed.
S1Report check_s1_constraint(const VectorField2& u, const DomainSpec& dom, double tol);
S1Report check_s1_constraint(const VectorField2& u, const Mask& region, double tol);

/// h^2 * sum |u|^2 over the mask (all nodes when absent).
double l2_norm(const VectorField2& u, const Mask* mask = nullptr);

/// Neumaier-compensated sum in index order.
class CompensatedSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Raster I/O: 5-line ASCII header then row-major little-endian float64 data.
// A vector field is written as two interleaved components per node.
void write_raster(std::ostream& os, const VectorField2& u);
void write_raster(std::ostream& os, const ScalarField& f);
VectorField2 read_vector_raster(std::istream& is, double support_radius);
ScalarField read_scalar_raster(std::istream& is);
void write_mask_csv(std::ostream& os, const Grid2& g, const Mask& m);

}  // namespace fraclab
