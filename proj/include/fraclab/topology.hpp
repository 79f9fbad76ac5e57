#pragma once

#include <stdexcept>
#include <vector>

#include "fraclab/field.hpp"

namespace fraclab {

/// Per-cell scalar; cell (i, j) has corners node(i, j) .. node(i+1, j+1).
struct JacobianField {
  Grid2 grid;
  std::vector<double> values;  // (nx-1) x (ny-1), row-major

  explicit JacobianField(const Grid2& g);
  int cx() const { return grid.nx() - 1; }
  int cy() const { return grid.ny() - 1; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * cx() + i; }
  double& at(int i, int j) { return values[index(i, j)]; }
  double at(int i, int j) const { return values[index(i, j)]; }
  Point cell_center(int i, int j) const;
  /// h^2 * sum over the cells (all cells when no mask is given).
  double integral(const Mask* cells = nullptr) const;
  double l1_norm() const;
  /// The cell values as a node field on the grid of cell centers.
  ScalarField as_scalar_field() const;
};

/// Cell-center raster in the field raster format.
void write_raster(std::ostream& os, const JacobianField& J);

using CellMask = Mask;

/// Cells whose centers lie in the open disk.
CellMask cells_in_disk(const Grid2& g, Point center, double radius);

/// det grad u at cell centers from the cell-centered differences of the four
/// corners. For the bilinear interpolant this is also the exact cell average.
JacobianField jacobian(const VectorField2& u);

/// Divergence form: h^{-2} times the circulation of u^1 du^2 around each
/// cell, u taken linear along edges. Equal to jacobian(u) up to rounding.
JacobianField jacobian_divergence_form(const VectorField2& u);

/// j(u) = u^1 grad u^2 - u^2 grad u^1 at nodes (centered differences),
/// stored as jx + i jy.
VectorField2 current(const VectorField2& u);

/// curl j at cell centers from the corner values.
JacobianField curl_cells(const VectorField2& j);

struct DegreeResult {
  int degree = 0;
  double winding = 0.0;    // before rounding
  double residual = 0.0;   // |winding - degree|
  double min_modulus = 0.0;
};

class DegreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Winding number of u along a closed loop (counterclockwise positive):
/// trapezoid rule for (1/2pi) int u/|u| x d(u/|u|). Throws InvalidInput
/// when |u| < c_min somewhere on the loop and DegreeError when the
/// quadrature residual reaches 0.1.
DegreeResult degree(const VectorField2& u, const std::vector<Point>& loop, double c_min = 0.5);

/// (1/pi) int_A Ju over the cells of A; equals the degree on dA when |u| = 1
/// there.
double area_degree(const VectorField2& u, const CellMask& cells);

/// ||v - w||_2 (||grad v||_2 + ||grad w||_2).
double jacobian_flat_distance_bound(const VectorField2& v, const VectorField2& w);

/// 1/2 (J(v1 - w1, v2 + w2) + J(v1 + w1, v2 - w2)), which equals Jv - Jw.
JacobianField jacobian_difference_identity(const VectorField2& v, const VectorField2& w);

}  // namespace fraclab
