#include "fraclab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fraclab/field.hpp"

namespace fraclab {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[k] = x;
    r.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int n, int panels) {
  const GaussRule& g = gauss_legendre(n);
  double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * w, mid = lo + 0.5 * w;
    for (int k = 0; k < n; ++k) total += 0.5 * w * g.weights[k] * f(mid + 0.5 * w * g.nodes[k]);
  }
  return total;
}

double singular_cell_integral(double p) {
  if (!(p < 2.0)) throw InvalidInput("singular cell integral diverges for p >= 2");
  double q = 2.0 - p;
  double angular = integrate_1d([q](double t) { return std::pow(1.0 / std::cos(t), q); }, 0.0,
                                std::numbers::pi / 4, 20);
  return 8.0 * std::pow(0.5, q) / q * angular;
}

namespace {

// Tensor Gauss rule over [x0, x0+len] x [y0, y0+len] split into sub x sub panels.
template <class F>
void cell_quadrature(double cx, double cy, int sub, int order, F&& emit) {
  const GaussRule& g = gauss_legendre(order);
  double len = 1.0 / sub;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b) {
      double mx = cx - 0.5 + (a + 0.5) * len, my = cy - 0.5 + (b + 0.5) * len;
      for (int k = 0; k < order; ++k)
        for (int l = 0; l < order; ++l)
          emit(mx + 0.5 * len * g.nodes[k], my + 0.5 * len * g.nodes[l],
               0.25 * len * len * g.weights[k] * g.weights[l]);
    }
}

int subdivision(int i, int j) {
  int m = std::max(std::abs(i), std::abs(j));
  return m <= 1 ? 4 : (m <= 3 ? 2 : 1);
}

}  // namespace

double cell_power_integral(int i, int j, double p, double radius) {
  if (i == 0 && j == 0) throw InvalidInput("use singular_cell_integral for the origin cell");
  double near = std::hypot(std::max(0.0, std::abs(i) - 0.5), std::max(0.0, std::abs(j) - 0.5));
  double far = std::hypot(std::abs(i) + 0.5, std::abs(j) + 0.5);
  if (radius > 0.0 && near >= radius) return 0.0;
  double total = 0.0;
  if (radius > 0.0 && far > radius) {
    // Straddles the truncation circle: fine midpoint-Gauss with masking.
    cell_quadrature(i, j, 16, 2, [&](double x, double y, double w) {
      double r2 = x * x + y * y;
      if (r2 < radius * radius) total += w * std::pow(r2, -0.5 * p);
    });
    return total;
  }
  cell_quadrature(i, j, subdivision(i, j), 3, [&](double x, double y, double w) {
    total += w * std::pow(x * x + y * y, -0.5 * p);
  });
  return total;
}

void cell_vector_integral(int i, int j, double p, double& out_x, double& out_y) {
  if (i == 0 && j == 0) throw InvalidInput("vector kernel integral is odd over the origin cell");
  double sx = 0.0, sy = 0.0;
  cell_quadrature(i, j, subdivision(i, j), 3, [&](double x, double y, double w) {
    double k = w * std::pow(x * x + y * y, -0.5 * p);
    sx += k * x;
    sy += k * y;
  });
  out_x = sx;
  out_y = sy;
}

double outside_square_integral(double p, double a) {
  if (!(p > 2.0)) throw InvalidInput("outside-square integral diverges for p <= 2");
  double q = p - 2.0;
  double angular = integrate_1d([q](double t) { return std::pow(std::cos(t), q); }, 0.0, std::numbers::pi / 4, 20);
  return std::pow(a, -q) * 8.0 / q * angular;
}

OffsetTable symmetric_table(int K, const std::function<double(int, int)>& f) {
  OffsetTable t;
  t.K = K;
  t.w.assign(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1), 0.0);
  for (int i = 0; i <= K; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = f(i, j);
      for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
          t.at(sx * i, sy * j) = v;
          t.at(sx * j, sy * i) = v;
        }
    }
  return t;
}

}  // namespace fraclab
