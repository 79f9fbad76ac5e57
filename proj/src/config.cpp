#include "fraclab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

namespace fraclab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  std::string t = trim(v);
  double out = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size()) throw InvalidInput("expected a number, got '" + t + "'");
  return out;
}

long to_long(const std::string& v) {
  std::string t = trim(v);
  long out = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || p != t.data() + t.size()) throw InvalidInput("expected an integer, got '" + t + "'");
  return out;
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw InvalidInput("empty list");
  return out;
}

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

}  // namespace

Grid2 ExperimentConfig::make_grid() const { return Grid2::square(side, grid); }

DomainSpec ExperimentConfig::domain() const {
  return DomainSpec::disk(make_grid(), {0.0, 0.0}, omega_radius, band, R, d0);
}

FracParams ExperimentConfig::params(double s) const { return make_params(s, R); }

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw InvalidInput(msg);
  };
  need(grid >= 8, "grid must be at least 8");
  need(side > 0.0, "side must be positive");
  need(omega_radius > 0.0 && band > 0.0, "omega_radius and band must be positive");
  need(!s_list.empty() && strictly_increasing(s_list), "s_list must be strictly increasing");
  for (double s : s_list) need(s > 0.0 && s < 1.0, "s_list entries must lie in (0, 1)");
  for (double s : lemma_s) need(s > 0.0 && s < 1.0, "lemma_s entries must lie in (0, 1)");
  need(strictly_increasing(sigma_list) && sigma_list.front() > 0.0, "sigma_list must be positive and increasing");
  need(M > 2, "M must exceed 2");
  need(eta > 0.0 && eta < 1.0, "eta must lie in (0, 1)");
  for (double e : etas) need(e > 0.0 && e < 1.0, "etas entries must lie in (0, 1)");
  for (double t : t_list) need(t > 0.0 && t <= 0.6 * band, "t_list entries must lie in (0, 0.6 band]");
  need(flat_tol > 0.0 && flat_max_iter > 0, "flat_tol and flat_max_iter must be positive");
  need(random_fields >= 0, "random_fields must be nonnegative");
  need(lemma_grid >= 16, "lemma_grid must be at least 16");
  need(mu.total_degree() == d0, "total degree of atoms must equal d0");
  const double support = 1.5 * (omega_radius + band);
  need(R > 2.0 * support, "R must exceed the datum support diameter " + std::to_string(2.0 * support));
  need(support < 0.5 * side, "the datum support must fit in the grid");
  DomainSpec dom = domain();
  for (double s : s_list) {
    RecoveryConfig rc{mu, r, s, M, split_distance};
    rc.validate(dom);
  }
}

ConfigError::ConfigError(const std::string& source, int line, const std::string& msg)
    : InvalidInput(source + ":" + std::to_string(line) + ": " + msg), line(line) {}

DiracSum parse_atoms(const std::string& text) {
  static const std::regex atom(R"(\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\)\s*:\s*([-+]?[0-9]+))");
  DiracSum mu;
  std::string rest = text;
  std::smatch m;
  while (std::regex_search(rest, m, atom)) {
    std::string gap = trim(m.prefix().str());
    if (!gap.empty() && gap != ";") throw InvalidInput("cannot parse atoms near '" + gap + "'");
    int d = static_cast<int>(to_long(m[3].str()));
    if (d == 0) throw InvalidInput("atom degree must be nonzero");
    mu.atoms.push_back({{to_double(m[1].str()), to_double(m[2].str())}, d});
    rest = m.suffix().str();
  }
  std::string tail = trim(rest);
  if (!tail.empty() && tail != ";") throw InvalidInput("cannot parse atoms near '" + tail + "'");
  return mu;
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> keys = {
      {"grid", [&](const std::string& v) { c.grid = static_cast<int>(to_long(v)); }},
      {"side", [&](const std::string& v) { c.side = to_double(v); }},
      {"omega_radius", [&](const std::string& v) { c.omega_radius = to_double(v); }},
      {"band", [&](const std::string& v) { c.band = to_double(v); }},
      {"R", [&](const std::string& v) { c.R = to_double(v); }},
      {"d0", [&](const std::string& v) { c.d0 = static_cast<int>(to_long(v)); }},
      {"s_list", [&](const std::string& v) { c.s_list = to_list(v); }},
      {"atoms", [&](const std::string& v) { c.mu = parse_atoms(v); }},
      {"r", [&](const std::string& v) { c.r = to_double(v); }},
      {"M", [&](const std::string& v) { c.M = static_cast<int>(to_long(v)); }},
      {"eta", [&](const std::string& v) { c.eta = to_double(v); }},
      {"etas", [&](const std::string& v) { c.etas = to_list(v); }},
      {"t_list", [&](const std::string& v) { c.t_list = to_list(v); }},
      {"flat_tol", [&](const std::string& v) { c.flat_tol = to_double(v); }},
      {"flat_max_iter", [&](const std::string& v) { c.flat_max_iter = to_long(v); }},
      {"intercept_tol", [&](const std::string& v) { c.intercept_tol = to_double(v); }},
      {"random_fields", [&](const std::string& v) { c.random_fields = static_cast<int>(to_long(v)); }},
      {"seed", [&](const std::string& v) { c.seed = static_cast<unsigned>(to_long(v)); }},
      {"output_dir", [&](const std::string& v) { c.output_dir = trim(v); }},
      {"lemma_s", [&](const std::string& v) { c.lemma_s = to_list(v); }},
      {"sigma_list", [&](const std::string& v) { c.sigma_list = to_list(v); }},
      {"lemma_grid", [&](const std::string& v) { c.lemma_grid = static_cast<int>(to_long(v)); }},
      {"lemma_r", [&](const std::string& v) { c.lemma_r = to_double(v); }},
      {"split_distance", [&](const std::string& v) { c.split_distance = to_double(v); }},
  };
  std::map<std::string, int> seen;  // key -> line of its last assignment
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, no, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(source, no, "unknown key '" + key + "'");
    seen[key] = no;
    try {
      it->second(value);
    } catch (const InvalidInput& e) {
      throw ConfigError(source, no, key + ": " + e.what());
    }
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    // Point at the line of the parameter the message names first.
    const std::string msg = e.what();
    int at = no;
    std::size_t best = std::string::npos;
    for (const auto& [key, ln] : seen) {
      static const std::regex word_end("[a-z_0-9]");
      for (std::size_t p = msg.find(key); p != std::string::npos; p = msg.find(key, p + 1)) {
        bool left = p == 0 || !std::regex_match(msg.substr(p - 1, 1), word_end);
        bool right = p + key.size() >= msg.size() || !std::regex_match(msg.substr(p + key.size(), 1), word_end);
        if (left && right && p < best) {
          best = p;
          at = ln;
        }
      }
    }
    throw ConfigError(source, at, msg);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "cannot open file");
  return parse_config(f, path);
}

}  // namespace fraclab
