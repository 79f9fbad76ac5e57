#pragma once

#include <array>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/field.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

enum class Normalization {
  raw,         // gamma_s^{-1} |z|^{-(1+s)}, truncated at R
  normalized,  // (1-s) / (2 pi R^{1-s}) |z|^{-(1+s)} on B_R: unit mass
};

/// Cell-integrated truncated Riesz kernel on a grid.
struct RieszKernel {
  FracParams params;
  Grid2 grid;
  Normalization normalization;
  /// int_{cell(z) n B_R} |z'|^{-(1+s)} dz' in physical units; the origin
  /// cell is integrated analytically.
  OffsetTable cell_weights;
  double prefactor = 0.0;

  /// prefactor * sum of cell weights (1 for the normalized kernel up to
  /// discretisation of the circle |z| = R).
  double total_mass() const;
};

RieszKernel make_riesz_kernel(const FracParams& params, const Grid2& grid, Normalization norm);

/// Per-node 2x2 matrix; m[a][b] = d_b u_a (rows: components, columns: directions).
using Mat2 = std::array<std::array<double, 2>, 2>;

struct FracGradField {
  Grid2 grid;
  std::vector<Mat2> values;
};

struct PotentialOptions {
  /// Largest FFT side the caller accepts; 0 means unlimited.
  int max_fft_size = 0;
  /// Skip the R > support-diameter precondition (truncated kernel applied to
  /// a general field).
  bool allow_general_fields = false;
};

/// I_{1-s}u or I~_{1-s}u by zero-padded FFT convolution with the
/// cell-integrated kernel. Throws InvalidInput when R does not exceed the
/// support diameter or when the padding would exceed max_fft_size.
VectorField2 potential(const VectorField2& u, const FracParams& params, Normalization norm,
                       const PotentialOptions& opts = {});
VectorField2 potential(const VectorField2& u, const RieszKernel& kernel, const PotentialOptions& opts = {});

/// Same convolution by direct summation (O(N^2 K^2)); test oracle.
VectorField2 potential_direct(const VectorField2& u, const RieszKernel& kernel);

/// Centered differences (one-sided on the grid edge).
FracGradField gradient(const VectorField2& v);

/// grad_s u computed as grad I_{1-s}u (FFT path).
FracGradField frac_gradient(const VectorField2& u, const FracParams& params, const PotentialOptions& opts = {});

/// grad_s u by direct singular quadrature of the defining integral at the
/// listed nodes. The 9x9 cell block around x carries a first-order Taylor
/// correction with the analytic second moment of the kernel; the rest is a
/// plain cell-integrated sum. O(N^2) per node.
std::vector<Mat2> frac_gradient_direct(const VectorField2& u, const FracParams& params,
                                       const std::vector<std::size_t>& nodes);

/// det of grad I u at each node.
ScalarField jacobian_of_potential(const VectorField2& u, const FracParams& params,
                                  Normalization norm = Normalization::raw);

double frobenius_sq(const Mat2& m);

}  // namespace fraclab
