#include "fraclab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/fft.hpp"

namespace fraclab {

namespace {

constexpr int kTaylorBlock = 4;  // |z|_inf <= 4 cells use the Taylor-corrected sum

int kernel_extent(const Grid2& g, double R) {
  int k = static_cast<int>(std::ceil(R / g.h() + 0.5));
  return std::min(k, std::max(g.nx(), g.ny()) - 1);
}

}  // namespace

double RieszKernel::total_mass() const {
  CompensatedSum acc;
  for (double w : cell_weights.w) acc.add(w);
  return prefactor * acc.value();
}

RieszKernel make_riesz_kernel(const FracParams& params, const Grid2& grid, Normalization norm) {
  const double h = grid.h();
  const double p = 1.0 + params.s;
  if (params.R <= h) throw InvalidInput("kernel radius must exceed the grid spacing");
  const double scale = std::pow(h, 2.0 - p);
  const double radius = params.R / h;
  const int K = kernel_extent(grid, params.R);
  RieszKernel k{params, grid, norm, {}, 0.0};
  k.cell_weights = symmetric_table(K, [&](int i, int j) {
    if (i == 0 && j == 0) return scale * singular_cell_integral(p);
    return scale * cell_power_integral(i, j, p, radius);
  });
  k.prefactor = norm == Normalization::raw
                    ? 1.0 / params.gamma_s
                    : (1.0 - params.s) / (2.0 * std::numbers::pi * std::pow(params.R, 1.0 - params.s));
  return k;
}

VectorField2 potential(const VectorField2& u, const RieszKernel& kernel, const PotentialOptions& opts) {
  const Grid2& g = u.grid();
  if (!(g == kernel.grid)) throw InvalidInput("kernel was built for another grid");
  if (!opts.allow_general_fields && !(kernel.params.R > 2.0 * u.support_radius()))
    throw InvalidInput("kernel radius R must exceed the support diameter of the field");
  const int pad = convolution_padding(g.nx(), g.ny(), kernel.cell_weights.K);
  if (opts.max_fft_size > 0 && pad > opts.max_fft_size)
    throw InvalidInput("grid too small to zero-pad without wraparound: FFT size " + std::to_string(pad) +
                       " required, limit " + std::to_string(opts.max_fft_size));
  auto out = fft_convolve(u.values(), g.nx(), g.ny(), kernel.cell_weights, pad);
  for (cplx& v : out) v *= kernel.prefactor;
  return VectorField2(g, std::move(out), u.support_radius() + kernel.params.R);
}

VectorField2 potential(const VectorField2& u, const FracParams& params, Normalization norm,
                       const PotentialOptions& opts) {
  return potential(u, make_riesz_kernel(params, u.grid(), norm), opts);
}

VectorField2 potential_direct(const VectorField2& u, const RieszKernel& kernel) {
  const Grid2& g = u.grid();
  const int K = kernel.cell_weights.K;
  VectorField2 out(g, u.support_radius() + kernel.params.R);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx acc{};
      for (int zy = -K; zy <= K; ++zy)
        for (int zx = -K; zx <= K; ++zx) {
          int a = i - zx, b = j - zy;
          if (g.contains_index(a, b)) acc += kernel.cell_weights.at(zx, zy) * u(a, b);
        }
      out(i, j) = kernel.prefactor * acc;
    }
  return out;
}

FracGradField gradient(const VectorField2& v) {
  const Grid2& g = v.grid();
  FracGradField out{g, std::vector<Mat2>(g.size())};
  const double h = g.h();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      cplx dx, dy;
      if (i == 0)
        dx = (v(1, j) - v(0, j)) / h;
      else if (i == g.nx() - 1)
        dx = (v(i, j) - v(i - 1, j)) / h;
      else
        dx = (v(i + 1, j) - v(i - 1, j)) / (2 * h);
      if (j == 0)
        dy = (v(i, 1) - v(i, 0)) / h;
      else if (j == g.ny() - 1)
        dy = (v(i, j) - v(i, j - 1)) / h;
      else
        dy = (v(i, j + 1) - v(i, j - 1)) / (2 * h);
      out.values[g.index(i, j)] = Mat2{{{dx.real(), dy.real()}, {dx.imag(), dy.imag()}}};
    }
  return out;
}

FracGradField frac_gradient(const VectorField2& u, const FracParams& params, const PotentialOptions& opts) {
  return gradient(potential(u, params, Normalization::raw, opts));
}

std::vector<Mat2> frac_gradient_direct(const VectorField2& u, const FracParams& params,
                                       const std::vector<std::size_t>& nodes) {
  const Grid2& g = u.grid();
  const double h = g.h();
  const double s = params.s;
  const int nx = g.nx(), ny = g.ny();
  const int K = std::max(nx, ny) - 1;
  // Vector cell integrals of z |z|^{-(3+s)}, physical units h^{-s}.
  const double vscale = std::pow(h, -s);
  const int W = 2 * K + 1;
  std::vector<double> wx(static_cast<std::size_t>(W) * W, 0.0), wy(wx.size(), 0.0);
  for (int j = -K; j <= K; ++j)
    for (int i = -K; i <= K; ++i) {
      if (i == 0 && j == 0) continue;
      double ax, ay;
      if (j >= 0 && i >= 0) {
        cell_vector_integral(i, j, 3.0 + s, ax, ay);
      } else {
        // Odd symmetry in each coordinate.
        cell_vector_integral(std::abs(i), std::abs(j), 3.0 + s, ax, ay);
        ax = i < 0 ? -ax : ax;
        ay = j < 0 ? -ay : ay;
      }
      std::size_t k = static_cast<std::size_t>(j + K) * W + (i + K);
      wx[k] = vscale * ax;
      wy[k] = vscale * ay;
    }
  // Second moment of the kernel over the Taylor block: int z_a z_b |z|^{-(3+s)} = t delta_ab.
  double t = 0.0;
  const double sscale = std::pow(h, 1.0 - s);
  for (int j = -kTaylorBlock; j <= kTaylorBlock; ++j)
    for (int i = -kTaylorBlock; i <= kTaylorBlock; ++i)
      t += sscale * (i == 0 && j == 0 ? singular_cell_integral(1.0 + s) : cell_power_integral(i, j, 1.0 + s));
  t *= 0.5;

  const FracGradField grad = gradient(u);
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (u.values()[k] != cplx{}) support.push_back(k);

  std::vector<Mat2> out(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const int xi = static_cast<int>(nodes[n] % nx), xj = static_cast<int>(nodes[n] / nx);
    const cplx ux = u.values()[nodes[n]];
    const Mat2& A = grad.values[nodes[n]];
    double m00 = A[0][0] * t, m01 = A[0][1] * t, m10 = A[1][0] * t, m11 = A[1][1] * t;
    // Far part: only u(y) contributes because the odd kernel integrates to
    // zero over the complement of the symmetric block.
    for (std::size_t k : support) {
      const int yi = static_cast<int>(k % nx), yj = static_cast<int>(k / nx);
      const int zi = yi - xi, zj = yj - xj;
      if (std::abs(zi) <= kTaylorBlock && std::abs(zj) <= kTaylorBlock) continue;
      const std::size_t w = static_cast<std::size_t>(zj + K) * W + (zi + K);
      const cplx uy = u.values()[k];
      m00 += uy.real() * wx[w];
      m01 += uy.real() * wy[w];
      m10 += uy.imag() * wx[w];
      m11 += uy.imag() * wy[w];
    }
    // Near block: remainder u(y) - u(x) - A z is second order in z.
    for (int zj = -kTaylorBlock; zj <= kTaylorBlock; ++zj)
      for (int zi = -kTaylorBlock; zi <= kTaylorBlock; ++zi) {
        if (zi == 0 && zj == 0) continue;
        const int yi = xi + zi, yj = xj + zj;
        const cplx uy = g.contains_index(yi, yj) ? u(yi, yj) : cplx{};
        const double zx = zi * h, zy = zj * h;
        const double r0 = uy.real() - ux.real() - (A[0][0] * zx + A[0][1] * zy);
        const double r1 = uy.imag() - ux.imag() - (A[1][0] * zx + A[1][1] * zy);
        const std::size_t w = static_cast<std::size_t>(zj + K) * W + (zi + K);
        m00 += r0 * wx[w];
        m01 += r0 * wy[w];
        m10 += r1 * wx[w];
        m11 += r1 * wy[w];
      }
    const double c = params.grad_constant;
    out[n] = Mat2{{{c * m00, c * m01}, {c * m10, c * m11}}};
  }
  return out;
}

ScalarField jacobian_of_potential(const VectorField2& u, const FracParams& params, Normalization norm) {
  FracGradField gp = gradient(potential(u, params, norm));
  ScalarField j(u.grid());
  for (std::size_t k = 0; k < j.values.size(); ++k) {
    const Mat2& m = gp.values[k];
    j.values[k] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  }
  return j;
}

double frobenius_sq(const Mat2& m) {
  return m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
}

}  // namespace fraclab
