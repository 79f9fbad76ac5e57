#pragma once

#include <istream>
#include <string>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/field.hpp"
#include "fraclab/vortex.hpp"

namespace fraclab {

/// Experiment parameters, read from `key = value` lines ('#' starts a
/// comment). Lists are comma separated; atoms are written "(x,y):d" and
/// separated by whitespace or ';'.
struct ExperimentConfig {
  int grid = 256;            // nodes per side
  double side = 4.0;         // computational square
  double omega_radius = 1.0; // Omega = B_radius(0)
  double band = 0.25;        // U = band of this half-width around dOmega
  double R = 3.8;            // kernel radius; must exceed the datum support diameter
  int d0 = 1;
  std::vector<double> s_list = {0.9, 0.95, 0.99, 0.995, 0.999};
  DiracSum mu{{{{0.0, 0.0}, 1}}};
  double r = 0.2;            // recovery balls B_r(x_i)
  int M = 8;
  double eta = 0.5;
  std::vector<double> etas = {0.25, 0.5, 0.75};
  std::vector<double> t_list = {0.05, 0.1, 0.15};  // dilations of dOmega
  double flat_tol = 1e-4;
  long flat_max_iter = 400000;
  double intercept_tol = 0.1;  // relative, against pi |mu|
  int random_fields = 50;
  unsigned seed = 1;
  std::string output_dir = ".";
  // Lemma suite.
  std::vector<double> lemma_s = {0.5, 0.8};
  std::vector<double> sigma_list = {0.1, 0.2, 0.4};
  int lemma_grid = 256;      // nodes per unit length of the scaling grid
  double lemma_r = 0.9;      // r of the I1/I2/I3 split
  double split_distance = 0.0;  // 0: four grid spacings

  Grid2 make_grid() const;
  DomainSpec domain() const;
  FracParams params(double s) const;
  /// Throws InvalidInput naming the offending parameter.
  void validate() const;
};

class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg);
  int line;
};

ExperimentConfig parse_config(std::istream& is, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// "(x,y):d (x,y):d ..." -> DiracSum. Throws InvalidInput.
DiracSum parse_atoms(const std::string& text);

}  // namespace fraclab
