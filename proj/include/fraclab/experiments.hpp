#pragma once

#include <string>
#include <vector>

#include "fraclab/config.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/flatnorm.hpp"
#include "fraclab/topology.hpp"

namespace fraclab {

struct FitResult {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = intercept + slope x.
FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SweepRow {
  double s = 0.0;
  FracParams params;
  EnergyBreakdown energy;       // of the energy competitor (cores at sqrt(1-s))
  double flat_dist = 0.0;       // flat(closure Omega) distance of J(I~u_s) to pi mu
  double flat_gap = 0.0;
  int deg_boundary = 0;         // degree of I~u_s on dOmega_t, middle t
  int detected = 0;             // vortices found in J(I~u_s)
  double l2_defect = 0.0;       // ||u - u_s||^2
  double grad_us = 0.0;         // int |grad u_s|^2
  std::string error;            // nonempty when the row aborted
  bool ok() const { return error.empty(); }
};

struct SweepReport {
  std::vector<SweepRow> rows;
  FitResult fit;
  double expected = 0.0;        // pi |mu|(closure Omega)
  double intercept_tol = 0.0;
  bool intercept_ok = false;
  bool flat_decreasing = false;
  double max_l2_ratio = 0.0;    // max ||u - u_s||^2 / (1-s)^2
  double max_grad_ratio = 0.0;  // max int |grad u_s|^2 / |log(1-s)|
  bool passed() const;
};

/// Builds the recovery pair for every s, evaluates F_s, the GL terms, the
/// flat distance to pi mu and the boundary degree, and fits F_s against
/// 1/|log(1-s)|. A failing row keeps its error message; the fit needs two
/// successful rows.
SweepReport run_gamma_sweep(const ExperimentConfig& cfg);

struct DetectedVortex {
  Point x;
  double jacobian = 0.0;
};

/// Local extrema of |J| over the masked nodes exceeding half the masked max.
/// Nothing is reported when the max stays below `floor` (a unit charge of
/// Jacobian mass pi spread over the unit disk has |J| = 1).
std::vector<DetectedVortex> detect_vortices(const ScalarField& J, const Mask& region, double floor = 1.0);

struct CompactnessRow {
  double s = 0.0;
  std::vector<DetectedVortex> detected;
  std::vector<double> center_errors;  // per atom, distance to the matched extremum
  double tolerance = 0.0;             // 3h + sqrt(1-s)
  bool localized = false;
  std::vector<int> degrees;           // per t
  bool degrees_ok = false;
  double flat_dist = 0.0;
  std::string error;
};

struct CompactnessReport {
  std::vector<double> t_list;
  std::vector<CompactnessRow> rows;
  bool passed() const;
};

CompactnessReport run_compactness_probe(const ExperimentConfig& cfg);

struct ScalingFit {
  double s = 0.0;
  std::vector<double> sigma;
  std::vector<double> value;  // unsquared seminorm of x/|x| on B_sigma
  FitResult fit;              // log value against log sigma
  double prefactor = 0.0;     // exp(intercept)
  bool slope_ok = false;
};

struct SplitRow {
  double s = 0.0;
  double tau = 0.0;
  bool resolved = false;  // (M+1) tau <= r: the cores fit inside the recovery balls
  double I1 = 0.0, I2 = 0.0, I3 = 0.0;
};

struct LemmaReport {
  int random_checked = 0;
  int random_failed = 0;
  int recovery_checked = 0;
  int recovery_failed = 0;
  std::vector<std::string> failures;
  std::vector<LowerBoundReport> samples;  // the recovery-field reports (u and u_s per s)
  std::vector<ScalingFit> scaling;
  bool prefactor_increasing = false;
  std::vector<SplitRow> split;
  bool I1_decreasing = false;
  bool I3_decreasing = false;
  double I3_constant = 0.0;  // max I3 |log(1-s)|
  bool passed() const;
};

/// Lower-bound battery, Lemma-type scaling of the vortex seminorm on balls,
/// and the three-region split of the recovery energy.
LemmaReport run_lemma_suite(const ExperimentConfig& cfg);

/// Random S^1-valued admissible field: u0 (degree 0) times e^{i psi}, psi a
/// sum of smooth random bumps supported in Omega.
VectorField2 random_admissible_field(const DomainSpec& dom, unsigned seed);

/// Lower-bound battery alone (used by the suite and the acceptance run).
LemmaReport run_lower_bound_battery(const ExperimentConfig& cfg);
std::vector<ScalingFit> run_scaling_fits(const ExperimentConfig& cfg);
std::vector<SplitRow> run_energy_split(const ExperimentConfig& cfg);

}  // namespace fraclab
