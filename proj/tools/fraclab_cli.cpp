// fraclab command line: experiment suites, flat norms and field dumps.
//
// Exit status: 0 when every assertion of the invoked suite holds, 1 when one
// fails, 2 on a bad configuration or bad arguments.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fraclab/config.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/report.hpp"
#include "fraclab/riesz.hpp"
#include "fraclab/selftest.hpp"

using namespace fraclab;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExperimentConfig load(const std::string& path) { return path.empty() ? ExperimentConfig{} : load_config(path); }

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  return dir / name;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
  std::ofstream f(p);
  if (!f) throw UsageError("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

int cmd_sweep(const std::string& config) {
  ExperimentConfig cfg = load(config);
  SweepReport rep = run_gamma_sweep(cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, rep);
  std::cout << csv.str();
  {
    std::ofstream f(out_path(cfg, "sweep.csv"));
    f << csv.str();
  }
  write_json(out_path(cfg, "sweep.json"), to_json(rep));
  for (const SweepRow& r : rep.rows)
    if (!r.ok()) std::cerr << "row s=" << format_double(r.s) << " aborted: " << r.error << '\n';
  std::cout << "fit: intercept=" << format_double(rep.fit.intercept) << " slope=" << format_double(rep.fit.slope)
            << " r2=" << format_double(rep.fit.r2) << " expected=" << format_double(rep.expected)
            << " (tol " << format_double(rep.intercept_tol) << " rel) intercept_ok=" << rep.intercept_ok
            << " flat_decreasing=" << rep.flat_decreasing << " max_l2_ratio=" << format_double(rep.max_l2_ratio)
            << " max_grad_ratio=" << format_double(rep.max_grad_ratio) << '\n';
  return rep.passed() ? 0 : 1;
}

int cmd_compactness(const std::string& config) {
  ExperimentConfig cfg = load(config);
  CompactnessReport rep = run_compactness_probe(cfg);
  write_json(out_path(cfg, "compactness.json"), to_json(rep));
  for (const CompactnessRow& r : rep.rows) {
    std::cout << "s=" << format_double(r.s) << " detected=" << r.detected.size() << " localized=" << r.localized
              << " degrees=";
    for (std::size_t k = 0; k < r.degrees.size(); ++k) std::cout << (k ? "," : "") << r.degrees[k];
    std::cout << " flat=" << format_double(r.flat_dist);
    if (!r.error.empty()) std::cout << " error: " << r.error;
    std::cout << '\n';
  }
  return rep.passed() ? 0 : 1;
}

int cmd_lemmas(const std::string& config) {
  ExperimentConfig cfg = load(config);
  LemmaReport rep = run_lemma_suite(cfg);
  write_json(out_path(cfg, "lemmas.json"), to_json(rep));
  std::cout << "lower bound: random " << rep.random_checked - rep.random_failed << "/" << rep.random_checked
            << ", recovery " << rep.recovery_checked - rep.recovery_failed << "/" << rep.recovery_checked << '\n';
  for (const std::string& f : rep.failures) std::cout << "  " << f << '\n';
  for (const ScalingFit& f : rep.scaling)
    std::cout << "scaling s=" << format_double(f.s) << " exponent=" << format_double(f.fit.slope)
              << " prefactor=" << format_double(f.prefactor) << " ok=" << f.slope_ok << '\n';
  for (const SplitRow& r : rep.split)
    std::cout << "split s=" << format_double(r.s) << " I1=" << format_double(r.I1) << " I2=" << format_double(r.I2)
              << " I3=" << format_double(r.I3) << (r.resolved ? "" : " (cores exceed r)") << '\n';
  std::cout << "prefactor_increasing=" << rep.prefactor_increasing << " I1_decreasing=" << rep.I1_decreasing
            << " I3_decreasing=" << rep.I3_decreasing << '\n';
  return rep.passed() ? 0 : 1;
}

struct FlatArgs {
  std::string atoms;
  int grid = 64;
  double side = 4.0;
  double radius = 1.0;
  std::string variant = "closed";
  std::string ball = "paper";
  double tol = 1e-6;
  long max_iter = 400000;
  std::string dump;
};

int cmd_flatnorm(const FlatArgs& a) {
  DiracSum mu = parse_atoms(a.atoms);
  if (mu.atoms.empty()) throw UsageError("--atoms lists no atoms");
  Grid2 g = Grid2::square(a.side, a.grid);
  DomainSpec dom = DomainSpec::disk(g, {0.0, 0.0}, a.radius, 0.25 * a.radius, 3.0 * a.radius, mu.total_degree());
  FlatVariant v = a.variant == "open" ? FlatVariant::open : FlatVariant::closed;
  FlatBall b = a.ball == "simple" ? FlatBall::simple : FlatBall::paper;
  FlatInput in(g, v == FlatVariant::open ? dom.omega : dom.omega_closed, v, b);
  in.add_atoms(mu, 1.0);
  FlatNormResult r = flat_norm(in, {a.tol, a.max_iter});
  std::cout << "flat_" << a.variant << " (" << a.ball << " ball) = " << format_double(r.value)
            << " gap=" << format_double(r.primal_dual_gap) << " iterations=" << r.iterations << '\n';
  std::cout << to_json(r).dump() << '\n';
  if (!a.dump.empty()) {
    std::ofstream f(a.dump, std::ios::binary);
    write_raster(f, r.phi);
  }
  return 0;
}

int cmd_field_dump(const std::string& config, double s, const std::string& what, const std::string& out) {
  ExperimentConfig cfg = load(config);
  DomainSpec dom = cfg.domain();
  RecoveryPair pair = build_recovery(RecoveryConfig{cfg.mu, cfg.r, s, cfg.M, cfg.split_distance}, dom);
  FracParams p = cfg.params(s);
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + out);
  if (what == "u") write_raster(f, pair.u);
  else if (what == "u_s") write_raster(f, pair.u_s);
  else if (what == "competitor") write_raster(f, pair.competitor);
  else if (what == "potential") write_raster(f, potential(pair.u_s, p, Normalization::normalized));
  else if (what == "jacobian") write_raster(f, jacobian_of_potential(pair.u_s, p, Normalization::normalized));
  else if (what == "omega") write_mask_csv(f, dom.grid, dom.omega);
  else throw UsageError("unknown field '" + what + "'");
  return 0;
}

int cmd_selftest() {
  bool ok = true;
  for (const SelfCheck& c : run_selftest()) {
    std::printf("%-4s %-48s err=%.3e bound=%.1e\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.error, c.bound);
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Ginzburg-Landau vortex experiments"};
  app.require_subcommand(1);

  std::string config;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config, "key = value experiment file (defaults when absent)")
        ->check(CLI::ExistingFile);
  };
  CLI::App* sweep = app.add_subcommand("sweep", "F_s along the s-list, affine fit against 1/|log(1-s)|");
  add_config(sweep);
  CLI::App* comp = app.add_subcommand("compactness", "vortex localisation and boundary degrees");
  add_config(comp);
  CLI::App* lem = app.add_subcommand("lemmas", "lower-bound battery, ball scaling, energy split");
  add_config(lem);

  FlatArgs fa;
  CLI::App* flat = app.add_subcommand("flatnorm", "flat norm of a sum of Dirac atoms in the unit disk");
  flat->add_option("--atoms", fa.atoms, "atoms as \"(x,y):d ...\"")->required();
  flat->add_option("--grid", fa.grid, "nodes per side");
  flat->add_option("--side", fa.side, "side of the computational square");
  flat->add_option("--radius", fa.radius, "disk radius");
  flat->add_option("--variant", fa.variant)->check(CLI::IsMember({"open", "closed"}));
  flat->add_option("--ball", fa.ball, "paper: sup + Lip <= 1; simple: max(sup, Lip) <= 1")
      ->check(CLI::IsMember({"paper", "simple"}));
  flat->add_option("--tol", fa.tol, "primal-dual gap target");
  flat->add_option("--max-iter", fa.max_iter);
  flat->add_option("--dump-phi", fa.dump, "raster of the optimal test function");

  double s = 0.99;
  std::string what = "u_s", out = "field.vf2";
  CLI::App* dump = app.add_subcommand("field-dump", "write a recovery field as a raster");
  add_config(dump);
  dump->add_option("-s", s, "fractional order")->check(CLI::Range(0.0, 1.0));
  dump->add_option("--field", what, "u | u_s | competitor | potential | jacobian | omega");
  dump->add_option("-o,--out", out);

  CLI::App* self = app.add_subcommand("selftest", "oracle checks on small grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(config);
    if (comp->parsed()) return cmd_compactness(config);
    if (lem->parsed()) return cmd_lemmas(config);
    if (flat->parsed()) return cmd_flatnorm(fa);
    if (dump->parsed()) return cmd_field_dump(config, s, what, out);
    if (self->parsed()) return cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
