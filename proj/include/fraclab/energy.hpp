#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/field.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

/// Seminorm quadrature weights for offsets z on the grid, p = 2 + 2s:
///  - |z|_inf <= 3 cells: |z|^{-2} int_cell |z'|^{-2s}, i.e. the cell integral
///    for a quadratic difference profile;
///  - beyond: int_cell |z'|^{-p}.
/// The origin cell carries int_cell |z'|^{-2s}, multiplied by 1/2 ||grad u||^2.
struct GagliardoWeights {
  double s = 0.0;
  double h = 0.0;
  OffsetTable w;            // physical units, offsets in [-K, K]^2
  double diagonal = 0.0;    // int_{cell 0} |z|^{-2s}
  double outside = 0.0;     // int over |z|_inf > (K + 1/2) h of |z|^{-p}
};

GagliardoWeights make_gagliardo_weights(double s, double h, int K);

struct GagliardoSplit {
  double total = 0.0;
  double near = 0.0;  // pairs with |x - y| < cutoff (plus the diagonal cell)
  double tail = 0.0;
};

/// [u]^2_{s,2} over R^2 x R^2 by FFT autocorrelation:
///   sum_z w(z) ||u - tau_z u||^2, ||u - tau_z u||^2 = 2||u||^2 - 2<u, tau_z u>,
/// with the offsets beyond the grid closed analytically. O(N^2 log N).
double gagliardo_seminorm(const VectorField2& u, double s, std::optional<double> cutoff = std::nullopt);
GagliardoSplit gagliardo_split(const VectorField2& u, double s, double cutoff);

/// Same quadrature by direct O(N^4) pair summation; test oracle.
double gagliardo_direct(const VectorField2& u, double s);

/// Floor-bracket seminorm over A x A (A a node mask inside the grid),
/// optionally restricted to pairs with |x - y| < cutoff.
double gagliardo_on_region(const VectorField2& u, const Mask& region, double s,
                           std::optional<double> cutoff = std::nullopt);
double gagliardo_on_region_direct(const VectorField2& u, const Mask& region, double s);

/// Dirichlet integral by forward differences over grid edges (the same
/// stencil the seminorm diagonal uses).
double dirichlet_energy(const VectorField2& u, const Mask* region = nullptr);

/// Dirichlet integral by centered differences at nodes in `region`.
double dirichlet_energy_centered(const VectorField2& u, const Mask* region = nullptr);

struct EnergyBreakdown {
  double gagliardo = 0.0;
  double gagliardo_near = 0.0;
  double gagliardo_tail = 0.0;
  double F_s = 0.0;
  double gl_dirichlet = 0.0;
  double gl_potential = 0.0;
  FracParams params;
  double r_s = 0.0;
};

/// F_s(u) = (1-s) c_s [u]^2 / |log(1-s)| with the near/tail split at r_s
/// (default sqrt(1-s)). GL terms are those of I~_{1-s}u on `gl_region`
/// with eps = sqrt(1-s) and C = c'_s; left zero when no region is given.
EnergyBreakdown f_s(const VectorField2& u, const FracParams& params, std::optional<double> r_s = std::nullopt,
                    const Mask* gl_region = nullptr);

struct GLTerms {
  double dirichlet = 0.0;
  double potential = 0.0;
};

/// (1/|log eps|) int |grad v|^2 and (C/(eps^2 |log eps|)) int (|v|^2 - 1)^2 over the region.
GLTerms ginzburg_landau(const VectorField2& v, double eps, double C_pot, const Mask& region);

struct ChainCheck {
  double eta = 0.0;
  double F_s = 0.0;
  double gl_bound = 0.0;  // right-hand side of the eta-split
  bool holds = false;
};

struct LowerBoundReport {
  double left = 0.0;    // int (|I~u|^2 - 1)^2 over Omega~
  double middle = 0.0;  // 4 ||u||_inf^2 int |u - I~u|^2 over Omega~
  double right = 0.0;   // ||u||_inf^2 (1-s)^2 R^{2s-1} / pi [u]^2
  double right_cs = 0.0;  // same with R^{2s} (the Cauchy-Schwarz constant)
  double tolerance = 0.0;
  bool first_holds = false;
  bool second_holds = false;
  std::vector<ChainCheck> chain;
  bool passed() const;
  std::string describe() const;
};

/// Both inequalities of the potential estimate over Omega~ and the
/// eta-split Ginzburg-Landau lower bound of F_s for each eta.
LowerBoundReport lower_bound_check(const VectorField2& u, const FracParams& params, const DomainSpec& dom,
                                   const std::vector<double>& etas = {0.25, 0.5, 0.75});

}  // namespace fraclab
