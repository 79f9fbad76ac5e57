#include "fraclab/flatnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace fraclab {

FlatInput::FlatInput(const Grid2& g, Mask r, FlatVariant v, FlatBall b)
    : grid(g), region(std::move(r)), mass(g.size(), 0.0), variant(v), ball(b) {
  if (region.size() != g.size()) throw InvalidInput("region mask does not match the grid");
}

void FlatInput::add_cells(const JacobianField& density, double scale) {
  if (!(density.grid == grid)) throw InvalidInput("density lives on another grid");
  const double a = grid.cell_area() * scale;
  for (int j = 0; j < density.cy(); ++j)
    for (int i = 0; i < density.cx(); ++i) {
      const double m = a * density.at(i, j);
      if (m == 0.0) continue;
      std::size_t corners[4] = {grid.index(i, j), grid.index(i + 1, j), grid.index(i, j + 1), grid.index(i + 1, j + 1)};
      int inside = 0;
      for (std::size_t c : corners) inside += region[c] ? 1 : 0;
      if (inside == 0) continue;
      for (std::size_t c : corners)
        if (region[c]) mass[c] += m / inside;
    }
}

void FlatInput::add_nodes(const ScalarField& density, double scale) {
  if (!(density.grid == grid)) throw InvalidInput("density lives on another grid");
  const double a = grid.cell_area() * scale;
  for (std::size_t k = 0; k < mass.size(); ++k)
    if (region[k]) mass[k] += a * density.values[k];
}

void FlatInput::add_atom(Point x, double m) {
  int i = static_cast<int>(std::lround((x.x - grid.origin().x) / grid.h()));
  int j = static_cast<int>(std::lround((x.y - grid.origin().y) / grid.h()));
  if (!grid.contains_index(i, j) || !region[grid.index(i, j)]) throw InvalidInput("atom outside the region");
  mass[grid.index(i, j)] += m;
}

void FlatInput::add_atoms(const DiracSum& mu, double scale) {
  for (const Atom& a : mu.atoms) add_atom(a.x, scale * a.d);
}

double FlatInput::total_mass() const {
  CompensatedSum acc;
  for (std::size_t k = 0; k < mass.size(); ++k)
    if (region[k]) acc.add(mass[k]);
  return acc.value();
}

namespace {

struct Edge {
  int a, b;     // variable slots, -1 for a node pinned at 0
  double inv;   // 1 / length
};

class Solver {
 public:
  Solver(const FlatInput& in, const FlatOptions& opts) : in_(in), opts_(opts) {
    build_graph();
    phi_.assign(nodes_.size(), 0.0);
    y_.assign(edges_.size(), 0.0);
  }

  FlatNormResult run() {
    if (in_.ball == FlatBall::simple) {
      inner(1.0, 1.0, opts_.tol);
    } else {
      golden();
    }
    return finish();
  }

 private:
  void build_graph() {
    const Grid2& g = in_.grid;
    const int nx = g.nx(), ny = g.ny();
    std::vector<int> slot(g.size(), -2);  // -2: not in region
    std::vector<std::size_t> region_nodes;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (in_.region[k]) {
        slot[k] = -1;
        region_nodes.push_back(k);
      }
    if (region_nodes.empty()) throw InvalidInput("empty region");
    check_connected(region_nodes);
    auto in_region = [&](int i, int j) { return g.contains_index(i, j) && in_.region[g.index(i, j)]; };
    for (std::size_t k : region_nodes) {
      int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
      bool boundary = false;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di)
          if (!in_region(i + di, j + dj)) boundary = true;
      if (in_.variant == FlatVariant::open && boundary) continue;
      slot[k] = static_cast<int>(nodes_.size());
      nodes_.push_back(k);
    }
    slot_ = slot;
    const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
    for (std::size_t k : region_nodes) {
      int i = static_cast<int>(k % nx), j = static_cast<int>(k / nx);
      for (auto& d : dirs) {
        int a = i + d[0], b = j + d[1];
        if (a < 0 || b < 0 || a >= nx || b >= ny || !in_.region[g.index(a, b)]) continue;
        int sa = slot[k], sb = slot[g.index(a, b)];
        if (sa < 0 && sb < 0) continue;
        double len = g.h() * ((d[0] != 0 && d[1] != 0) ? std::numbers::sqrt2 : 1.0);
        edges_.push_back({sa, sb, 1.0 / len});
      }
    }
    m_.resize(nodes_.size());
    for (std::size_t v = 0; v < nodes_.size(); ++v) m_[v] = in_.mass[nodes_[v]];
    tau_.assign(nodes_.size(), 0.0);
    sigma_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      int free = 0;
      if (ed.a >= 0) {
        tau_[ed.a] += ed.inv;
        ++free;
      }
      if (ed.b >= 0) {
        tau_[ed.b] += ed.inv;
        ++free;
      }
      sigma_[e] = 1.0 / (free * ed.inv);
    }
    for (double& t : tau_) t = t > 0.0 ? 1.0 / t : 1.0;
  }

  void check_connected(const std::vector<std::size_t>& region_nodes) const {
    const Grid2& g = in_.grid;
    std::vector<unsigned char> seen(g.size(), 0);
    std::queue<std::size_t> q;
    q.push(region_nodes.front());
    seen[region_nodes.front()] = 1;
    std::size_t count = 0;
    while (!q.empty()) {
      std::size_t k = q.front();
      q.pop();
      ++count;
      int i = static_cast<int>(k % g.nx()), j = static_cast<int>(k / g.nx());
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          int a = i + di, b = j + dj;
          if (!g.contains_index(a, b)) continue;
          std::size_t n = g.index(a, b);
          if (in_.region[n] && !seen[n]) {
            seen[n] = 1;
            q.push(n);
          }
        }
    }
    if (count != region_nodes.size()) throw InvalidInput("flat-norm region must be connected");
  }

  // K^T y on the free nodes.
  void apply_kt(const std::vector<double>& y, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& ed = edges_[e];
      double v = y[e] * ed.inv;
      if (ed.a >= 0) out[ed.a] += v;
      if (ed.b >= 0) out[ed.b] -= v;
    }
  }

  double slope(const std::vector<double>& phi, std::size_t e) const {
    const Edge& ed = edges_[e];
    double pa = ed.a >= 0 ? phi[ed.a] : 0.0, pb = ed.b >= 0 ? phi[ed.b] : 0.0;
    return (pa - pb) * ed.inv;
  }

  double lipschitz(const std::vector<double>& phi) const {
    double L = 0.0;
    for (std::size_t e = 0; e < edges_.size(); ++e) L = std::max(L, std::abs(slope(phi, e)));
    return L;
  }

  double pairing(const std::vector<double>& phi) const {
    CompensatedSum acc;
    for (std::size_t v = 0; v < phi.size(); ++v) acc.add(m_[v] * phi[v]);
    return acc.value();
  }

  // Lower bound from a primal iterate rescaled into the ball.
  void offer_primal(const std::vector<double>& phi) {
    double M = 0.0;
    for (double p : phi) M = std::max(M, std::abs(p));
    double L = lipschitz(phi);
    double norm = in_.ball == FlatBall::paper ? M + L : std::max(M, L);
    if (!(norm > 0.0)) return;
    double val = pairing(phi) / norm;
    if (val > best_lb_) {
      best_lb_ = val;
      best_phi_ = phi;
      for (double& p : best_phi_) p /= norm;
    }
  }

  // Upper bound from a dual flow y (scaled by the best t >= 0).
  void offer_dual(const std::vector<double>& y) {
    std::vector<double> r(nodes_.size());
    apply_kt(y, r);
    CompensatedSum bs;
    for (double v : y) bs.add(std::abs(v));
    const double B = bs.value();
    auto residual = [&](double t) {
      CompensatedSum a;
      for (std::size_t v = 0; v < r.size(); ++v) a.add(std::abs(m_[v] - t * r[v]));
      return a.value();
    };
    const bool paper = in_.ball == FlatBall::paper;
    auto f = [&](double t) { return paper ? std::max(residual(t), t * B) : residual(t) + t * B; };
    double lo = 0.0, hi = 2.0;
    double m1 = 0.0;
    for (double v : m_) m1 += std::abs(v);
    if (B > 0.0) hi = std::max(hi, 2.0 * m1 / B);
    for (int it = 0; it < 100; ++it) {
      double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (f(a) <= f(b))
        hi = b;
      else
        lo = a;
    }
    best_ub_ = std::min({best_ub_, f(0.5 * (lo + hi)), f(1.0), m1});
  }

  double gap() const { return best_ub_ - best_lb_; }

  // PDHG for max <m, phi> over |phi| <= lam, |K phi| <= lip; returns the
  // feasible value of the current iterate.
  struct BoxGap {
    double value, upper;
    double gap() const { return upper - value; }
  };

  // Certified bounds of the box problem for an iterate pair.
  BoxGap box_gap(const std::vector<double>& phi, const std::vector<double>& y, double lam, double lip,
                 std::vector<double>& kty) const {
    double L = lipschitz(phi);
    double scale = L > lip ? lip / L : 1.0;
    apply_kt(y, kty);
    CompensatedSum a, b;
    for (std::size_t v = 0; v < kty.size(); ++v) a.add(std::abs(m_[v] - kty[v]));
    for (double w : y) b.add(std::abs(w));
    return {scale * pairing(phi), lam * a.value() + lip * b.value()};
  }

  double weighted_dist(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& w) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]) / w[k];
    return std::sqrt(acc);
  }

  // Restarted PDHG for max <m, phi> over |phi| <= lam, |K phi| <= lip;
  // returns the feasible value of the final iterate.
  double inner(double lam, double lip, double inner_tol) {
    const std::size_t n = nodes_.size(), E = edges_.size();
    std::vector<double> kty(n), bar(n), phi_new(n);
    for (double& p : phi_) p = std::clamp(p, -lam, lam);
    std::vector<double> sum_phi(n, 0.0), sum_y(E, 0.0), avg_phi(n), avg_y(E);
    std::vector<double> restart_phi = phi_, restart_y = y_;
    const long check = 64;
    long since = 0, total = 0;
    BoxGap last = box_gap(phi_, y_, lam, lip, kty);
    double restart_gap = last.gap(), prev_candidate = INFINITY;
    for (long it = 0;; ++it) {
      apply_kt(y_, kty);
      for (std::size_t v = 0; v < n; ++v) {
        phi_new[v] = std::clamp(phi_[v] - omega_ * tau_[v] * (kty[v] - m_[v]), -lam, lam);
        bar[v] = 2.0 * phi_new[v] - phi_[v];
        sum_phi[v] += phi_new[v];
      }
      phi_.swap(phi_new);
      for (std::size_t e = 0; e < E; ++e) {
        double sg = sigma_[e] / omega_;
        double v = y_[e] + sg * slope(bar, e);
        double thr = sg * lip;
        y_[e] = v > thr ? v - thr : (v < -thr ? v + thr : 0.0);
        sum_y[e] += y_[e];
      }
      ++iterations_;
      ++since;
      ++total;
      if ((it + 1) % check != 0) continue;

      for (std::size_t v = 0; v < n; ++v) avg_phi[v] = sum_phi[v] / since;
      for (std::size_t e = 0; e < E; ++e) avg_y[e] = sum_y[e] / since;
      BoxGap cur = box_gap(phi_, y_, lam, lip, kty);
      BoxGap avg = box_gap(avg_phi, avg_y, lam, lip, kty);
      const bool use_avg = avg.gap() < cur.gap();
      const BoxGap cand = use_avg ? avg : cur;
      last = cand;
      offer_primal(use_avg ? avg_phi : phi_);
      if ((it + 1) % (8 * check) == 0) offer_dual(use_avg ? avg_y : y_);
      if (cand.gap() <= inner_tol || gap() <= opts_.tol || iterations_ >= opts_.max_iter) {
        offer_dual(use_avg ? avg_y : y_);
        if (use_avg) {
          phi_ = avg_phi;
          y_ = avg_y;
        }
        break;
      }
      const double g = cand.gap();
      const bool restart = g <= 0.2 * restart_gap || (g <= 0.8 * restart_gap && g > prev_candidate) ||
                           since >= 0.36 * total;
      prev_candidate = g;
      if (!restart) continue;
      if (use_avg) {
        phi_ = avg_phi;
        y_ = avg_y;
      }
      // Rebalance primal and dual step sizes from the distance travelled.
      double dx = weighted_dist(phi_, restart_phi, tau_), dy = weighted_dist(y_, restart_y, sigma_);
      if (dx > 0.0 && dy > 0.0) omega_ = std::exp(0.5 * std::log(omega_) + 0.5 * std::log(dx / dy));
      restart_phi = phi_;
      restart_y = y_;
      restart_gap = g;
      prev_candidate = INFINITY;
      std::fill(sum_phi.begin(), sum_phi.end(), 0.0);
      std::fill(sum_y.begin(), sum_y.end(), 0.0);
      since = 0;
    }
    return last.value;
  }

  void golden() {
    // Endpoints: lambda = 0 gives 0; lambda = 1 forces phi constant.
    if (in_.variant == FlatVariant::closed) {
      std::vector<double> c(nodes_.size(), 1.0);
      if (pairing(c) < 0.0) std::fill(c.begin(), c.end(), -1.0);
      offer_primal(c);
    }
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0, b = 1.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = probe(x1);
    double f2 = probe(x2);
    while (b - a > 1e-10 && gap() > opts_.tol && iterations_ < opts_.max_iter) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = probe(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = probe(x1);
      }
    }
  }

  // Residual and flow mass of a dual flow: a = |m - K^T y|_1, b = |y|_1.
  std::pair<double, double> dual_terms(const std::vector<double>& y) const {
    std::vector<double> r(nodes_.size());
    apply_kt(y, r);
    CompensatedSum sa, sb;
    for (std::size_t v = 0; v < r.size(); ++v) sa.add(std::abs(m_[v] - r[v]));
    for (double w : y) sb.add(std::abs(w));
    return {sa.value(), sb.value()};
  }

  // One box solve at lambda. The box dual y satisfies lambda a + (1-lambda) b
  // ~ g(lambda), and a - b is a supergradient of g. At a kink of g neither
  // side's flow certifies the maximum alone, so the latest flows with a > b
  // and a < b are blended to equalise the two terms.
  double probe(double lam) {
    double f = inner(lam, 1.0 - lam, 0.25 * opts_.tol);
    auto [da, db] = dual_terms(y_);
    if (da >= db) {
      y_hi_ = y_;
      hi_ = {da, db};
    } else {
      y_lo_ = y_;
      lo_ = {da, db};
    }
    if (!y_hi_.empty() && !y_lo_.empty()) {
      double d_hi = hi_.first - hi_.second, d_lo = lo_.first - lo_.second;
      double theta = d_hi - d_lo > 0.0 ? -d_lo / (d_hi - d_lo) : 0.5;
      std::vector<double> mix(y_.size());
      for (std::size_t e = 0; e < mix.size(); ++e) mix[e] = theta * y_hi_[e] + (1.0 - theta) * y_lo_[e];
      offer_dual(mix);
    }
    return f;
  }

  FlatNormResult finish() {
    FlatNormResult r(in_.grid);
    r.value = best_lb_;
    r.upper = best_ub_;
    r.primal_dual_gap = std::max(0.0, gap());
    r.iterations = iterations_;
    if (!best_phi_.empty()) {
      for (std::size_t v = 0; v < nodes_.size(); ++v) r.phi.values[nodes_[v]] = best_phi_[v];
      for (double p : best_phi_) r.sup = std::max(r.sup, std::abs(p));
      r.lipschitz = lipschitz(best_phi_);
    }
    if (r.primal_dual_gap > opts_.tol)
      throw FlatNormError("flat norm did not converge: value " + std::to_string(r.value) + ", gap " +
                              std::to_string(r.primal_dual_gap),
                          r.value, r.primal_dual_gap);
    return r;
  }

  const FlatInput& in_;
  FlatOptions opts_;
  std::vector<std::size_t> nodes_;
  std::vector<int> slot_;
  std::vector<Edge> edges_;
  std::vector<double> m_, tau_, sigma_, phi_, y_, best_phi_, y_hi_, y_lo_;
  std::pair<double, double> hi_, lo_;
  double omega_ = 1.0;
  double best_lb_ = 0.0;
  double best_ub_ = INFINITY;
  long iterations_ = 0;
};

}  // namespace

FlatNormResult flat_norm(const FlatInput& input, const FlatOptions& opts) {
  if (!(opts.tol > 0.0)) throw InvalidInput("flat-norm tolerance must be positive");
  Solver s(input, opts);
  return s.run();
}

FlatNormResult flat_distance_jacobian_to_dirac(const VectorField2& u, const FracParams& params, const DiracSum& mu,
                                               const DomainSpec& dom, const FlatOptions& opts, Normalization norm) {
  ScalarField J = jacobian_of_potential(u, params, norm);
  FlatInput in(u.grid(), dom.omega_closed, FlatVariant::closed, FlatBall::paper);
  in.add_nodes(J);
  in.add_atoms(mu, -std::numbers::pi);
  return flat_norm(in, opts);
}

}  // namespace fraclab
