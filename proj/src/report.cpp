#include "fraclab/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace fraclab {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace {

// JSON has no NaN; such values become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const FracParams& p) {
  return {{"s", num(p.s)},           {"eps", num(p.eps)},
          {"R", num(p.R)},           {"gamma_s", num(p.gamma_s)},
          {"c_s", num(p.c_s)},       {"c_prime_s", num(p.c_prime_s)},
          {"c_dprime_s", num(p.c_dprime_s)}, {"quoz_factor", num(p.quoz_factor)},
          {"grad_constant", num(p.grad_constant)}, {"bbm_weight", num(p.bbm_weight())}};
}

json to_json(const EnergyBreakdown& e) {
  return {{"F_s", num(e.F_s)},
          {"gagliardo", num(e.gagliardo)},
          {"gagliardo_near", num(e.gagliardo_near)},
          {"gagliardo_tail", num(e.gagliardo_tail)},
          {"gl_dirichlet", num(e.gl_dirichlet)},
          {"gl_potential", num(e.gl_potential)},
          {"r_s", num(e.r_s)},
          {"params", to_json(e.params)}};
}

json to_json(const FlatNormResult& r) {
  return {{"value", num(r.value)},          {"upper", num(r.upper)},   {"gap", num(r.primal_dual_gap)},
          {"sup", num(r.sup)},              {"lipschitz", num(r.lipschitz)}, {"iterations", r.iterations}};
}

json to_json(const FitResult& f) {
  json res = json::array();
  for (double v : f.residuals) res.push_back(num(v));
  return {{"intercept", num(f.intercept)}, {"slope", num(f.slope)}, {"r2", num(f.r2)}, {"residuals", res}};
}

json to_json(const LowerBoundReport& r) {
  json chain = json::array();
  for (const ChainCheck& c : r.chain)
    chain.push_back({{"eta", c.eta}, {"F_s", num(c.F_s)}, {"gl_bound", num(c.gl_bound)}, {"holds", c.holds}});
  return {{"left", num(r.left)},         {"middle", num(r.middle)},         {"right", num(r.right)},
          {"right_cs", num(r.right_cs)}, {"tolerance", num(r.tolerance)},   {"first_holds", r.first_holds},
          {"second_holds", r.second_holds}, {"chain", chain},              {"passed", r.passed()}};
}

json to_json(const SweepReport& r) {
  json rows = json::array();
  for (const SweepRow& row : r.rows) {
    json j = {{"s", row.s}, {"params", to_json(row.params)}};
    if (row.ok()) {
      j["energy"] = to_json(row.energy);
      j["flat_dist"] = num(row.flat_dist);
      j["flat_gap"] = num(row.flat_gap);
      j["deg_boundary"] = row.deg_boundary;
      j["detected"] = row.detected;
      j["l2_defect"] = num(row.l2_defect);
      j["grad_us"] = num(row.grad_us);
    } else {
      j["error"] = row.error;
    }
    rows.push_back(std::move(j));
  }
  return {{"rows", rows},
          {"fit", to_json(r.fit)},
          {"expected_intercept", num(r.expected)},
          {"intercept_tol", num(r.intercept_tol)},
          {"intercept_ok", r.intercept_ok},
          {"flat_decreasing", r.flat_decreasing},
          {"max_l2_ratio", num(r.max_l2_ratio)},
          {"max_grad_ratio", num(r.max_grad_ratio)},
          {"passed", r.passed()}};
}

json to_json(const CompactnessReport& r) {
  json rows = json::array();
  for (const CompactnessRow& row : r.rows) {
    json det = json::array();
    for (const DetectedVortex& d : row.detected) det.push_back({{"x", d.x.x}, {"y", d.x.y}, {"jacobian", num(d.jacobian)}});
    json errs = json::array();
    for (double e : row.center_errors) errs.push_back(num(e));
    json j = {{"s", row.s},           {"detected", det},           {"center_errors", errs},
              {"tolerance", row.tolerance}, {"localized", row.localized}, {"degrees", row.degrees},
              {"degrees_ok", row.degrees_ok}, {"flat_dist", num(row.flat_dist)}};
    if (!row.error.empty()) j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  return {{"t_list", r.t_list}, {"rows", rows}, {"passed", r.passed()}};
}

json to_json(const LemmaReport& r) {
  json samples = json::array();
  for (const LowerBoundReport& s : r.samples) samples.push_back(to_json(s));
  json scaling = json::array();
  for (const ScalingFit& f : r.scaling) {
    json vals = json::array();
    for (double v : f.value) vals.push_back(num(v));
    scaling.push_back({{"s", f.s}, {"sigma", f.sigma}, {"value", vals}, {"fit", to_json(f.fit)},
                       {"prefactor", num(f.prefactor)}, {"slope_ok", f.slope_ok}});
  }
  json split = json::array();
  for (const SplitRow& s : r.split)
    split.push_back({{"s", s.s}, {"tau", s.tau}, {"resolved", s.resolved},
                     {"I1", num(s.I1)}, {"I2", num(s.I2)}, {"I3", num(s.I3)}});
  return {{"lower_bound",
           {{"random_checked", r.random_checked},
            {"random_failed", r.random_failed},
            {"recovery_checked", r.recovery_checked},
            {"recovery_failed", r.recovery_failed},
            {"failures", r.failures},
            {"recovery_samples", samples}}},
          {"scaling", scaling},
          {"prefactor_increasing", r.prefactor_increasing},
          {"split", split},
          {"I1_decreasing", r.I1_decreasing},
          {"I3_decreasing", r.I3_decreasing},
          {"I3_constant", num(r.I3_constant)},
          {"passed", r.passed()}};
}

void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  os << "s,eps,F_s,gagliardo_near,gagliardo_tail,gl_dirichlet,gl_potential,flat_dist,deg_boundary\n";
  for (const SweepRow& row : r.rows) {
    os << format_double(row.s) << ',' << format_double(std::sqrt(1.0 - row.s));
    if (row.ok()) {
      const EnergyBreakdown& e = row.energy;
      for (double v : {e.F_s, e.gagliardo_near, e.gagliardo_tail, e.gl_dirichlet, e.gl_potential, row.flat_dist})
        os << ',' << format_double(v);
      os << ',' << row.deg_boundary;
    } else {
      os << ",,,,,,,";
    }
    os << '\n';
  }
}

}  // namespace fraclab
