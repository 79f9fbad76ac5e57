#pragma once

// Dense-tableau simplex for max c.x s.t. A x <= b, x >= 0 with b >= 0, and the
// flat-norm LP built on top of it. Test oracle only: O(rows * cols) per pivot.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

struct LP {
  int n = 0;  // variables
  std::vector<std::vector<double>> A;
  std::vector<double> b, c;

  void row(std::vector<std::pair<int, double>> coeffs, double rhs) {
    std::vector<double> r(n, 0.0);
    for (auto [j, v] : coeffs) r[j] += v;
    A.push_back(std::move(r));
    b.push_back(rhs);
  }
};

// Bland's rule: entering = lowest index with positive reduced profit,
// leaving = lowest basic index among ratio-test ties. Never cycles.
inline double simplex_max(const LP& lp) {
  const int m = static_cast<int>(lp.A.size()), n = lp.n, w = n + m + 1;
  std::vector<double> T(static_cast<std::size_t>(m + 1) * w, 0.0);
  auto at = [&](int i, int j) -> double& { return T[static_cast<std::size_t>(i) * w + j]; };
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    if (lp.b[i] < 0.0) throw std::invalid_argument("simplex oracle needs b >= 0");
    for (int j = 0; j < n; ++j) at(i, j) = lp.A[i][j];
    at(i, n + i) = 1.0;
    at(i, w - 1) = lp.b[i];
    basis[i] = n + i;
  }
  for (int j = 0; j < n; ++j) at(m, j) = -lp.c[j];
  const double eps = 1e-12;
  for (long iter = 0; iter < 10000000; ++iter) {
    int e = -1;
    for (int j = 0; j < w - 1; ++j)
      if (at(m, j) < -eps) {
        e = j;
        break;
      }
    if (e < 0) return at(m, w - 1);
    int l = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double a = at(i, e);
      if (a <= eps) continue;
      double ratio = at(i, w - 1) / a;
      if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[i] < basis[l])) {
        best = ratio;
        l = i;
      }
    }
    if (l < 0) throw std::runtime_error("simplex oracle: unbounded");
    const double p = at(l, e);
    for (int j = 0; j < w; ++j) at(l, j) /= p;
    for (int i = 0; i <= m; ++i) {
      if (i == l) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      double* ri = &at(i, 0);
      const double* rl = &at(l, 0);
      for (int j = 0; j < w; ++j) ri[j] -= f * rl[j];
    }
    basis[l] = e;
  }
  throw std::runtime_error("simplex oracle: iteration limit");
}

// Flat norm of a node mass vector over the given nodes of a uniform grid of
// spacing h, 8-neighbour edges between region nodes, test functions free on
// every region node (closed variant).
//   paper:  sup |phi| + Lip(phi) <= 1
//   simple: sup |phi| <= 1 and Lip(phi) <= 1
// phi = psi - lambda with psi >= 0 keeps the right-hand sides nonnegative.
inline double flat_norm_lp(int nx, int ny, double h, const std::vector<unsigned char>& region,
                           const std::vector<double>& mass, bool paper) {
  std::vector<int> var(static_cast<std::size_t>(nx) * ny, -1);
  int n = 0;
  for (std::size_t k = 0; k < var.size(); ++k)
    if (region[k]) var[k] = n++;
  const int lam = n;
  LP lp;
  lp.n = paper ? n + 1 : n;
  lp.c.assign(lp.n, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < var.size(); ++k)
    if (var[k] >= 0) {
      lp.c[var[k]] = mass[k];
      total += mass[k];
    }
  // Objective <m, psi> - lambda sum m; the simple ball has lambda = 1 fixed.
  if (paper) lp.c[lam] = -total;
  for (int v = 0; v < n; ++v) {
    if (paper)
      lp.row({{v, 1.0}, {lam, -2.0}}, 0.0);
    else
      lp.row({{v, 1.0}}, 2.0);
  }
  const int offs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int a = var[static_cast<std::size_t>(j) * nx + i];
      if (a < 0) continue;
      for (auto& o : offs) {
        int i2 = i + o[0], j2 = j + o[1];
        if (i2 < 0 || j2 < 0 || i2 >= nx || j2 >= ny) continue;
        int b = var[static_cast<std::size_t>(j2) * nx + i2];
        if (b < 0) continue;
        double len = h * std::hypot(o[0], o[1]);
        if (paper) {
          lp.row({{a, 1.0}, {b, -1.0}, {lam, len}}, len);
          lp.row({{b, 1.0}, {a, -1.0}, {lam, len}}, len);
        } else {
          lp.row({{a, 1.0}, {b, -1.0}}, len);
          lp.row({{b, 1.0}, {a, -1.0}}, len);
        }
      }
    }
  if (paper) lp.row({{lam, 1.0}}, 1.0);
  double v = simplex_max(lp);
  return paper ? v : v - total;
}

}  // namespace oracle
