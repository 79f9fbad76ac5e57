#pragma once

#include <functional>
#include <vector>

namespace fraclab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n).
const GaussRule& gauss_legendre(int n);

/// Integral of f over [a, b] with an n-point Gauss rule on `panels` equal panels.
double integrate_1d(const std::function<double(double)>& f, double a, double b, int n = 20, int panels = 1);

/// Integral of |w|^{-p} over the unit square centred at the origin, p < 2,
/// evaluated in polar coordinates: 8 (1/2)^{2-p}/(2-p) int_0^{pi/4} sec^{2-p}.
double singular_cell_integral(double p);

/// Integral of |w|^{-p} over the unit cell centred at (i, j) != (0, 0), in
/// units where the grid spacing is 1, clipped to the disk |w| < radius
/// (radius <= 0 means unclipped). Cells touching the singular cell are
/// subdivided.
double cell_power_integral(int i, int j, double p, double radius = 0.0);

/// Componentwise integral of w |w|^{-p} over the unit cell centred at (i, j) != 0.
void cell_vector_integral(int i, int j, double p, double& out_x, double& out_y);

/// Integral of |z|^{-p} (p > 2) over the complement of the square
/// [-a, a]^2: a^{2-p} (8/(p-2)) int_0^{pi/4} cos^{p-2}.
double outside_square_integral(double p, double a);

/// Offset-indexed table for offsets in [-K, K]^2, row-major.
struct OffsetTable {
  int K = 0;
  std::vector<double> w;
  double at(int i, int j) const { return w[static_cast<std::size_t>(j + K) * (2 * K + 1) + (i + K)]; }
  double& at(int i, int j) { return w[static_cast<std::size_t>(j + K) * (2 * K + 1) + (i + K)]; }
};

/// Fills an offset table using the eight-fold symmetry of f(i, j).
OffsetTable symmetric_table(int K, const std::function<double(int, int)>& f);

}  // namespace fraclab
