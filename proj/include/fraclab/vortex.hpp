#pragma once

#include <vector>

#include "fraclab/field.hpp"

namespace fraclab {

struct Atom {
  Point x;
  int d = 0;
};

/// mu = sum d_i delta_{x_i}, d_i nonzero integers.
struct DiracSum {
  std::vector<Atom> atoms;

  int total_degree() const;
  int total_variation() const;
  /// Membership in X(Omega) / X(closure of Omega), read off the node masks
  /// at the node nearest each atom.
  bool in_open(const DomainSpec& dom) const;
  bool in_closed(const DomainSpec& dom) const;
};

struct RecoveryConfig {
  DiracSum mu;
  double r = 0.2;   // radius of the balls B_r(x_i)
  double s = 0.9;
  int M = 8;
  double split_distance = 0.0;  // 0: four grid spacings

  double core_radius() const { return 1.0 - s; }
  /// Throws InvalidInput unless core < r < min(dist(x_i, dOmega), |x_i - x_j| / 2).
  void validate(const DomainSpec& dom) const;
};

/// Moves p to the nearest cell center so no node meets the singularity.
Point snap_to_cell_center(const Grid2& g, Point p);

/// ((x - c)/|x - c|)^d as a complex power. A node exactly at c takes the
/// limit along the ray c + t (1, 0), t > 0, i.e. the value 1.
VectorField2 build_block(Point center, int d, const Grid2& grid);

/// u0 = ((x - c)/|x - c|)^{d0} chi(|x - c|): chi = 1 up to a = radius + band,
/// then 1 - log(rho/a)/log(b/a) down to 0 at the support radius b
/// (default b = 1.5 a). Support diameter 2b must stay below R.
VectorField2 build_boundary_datum(const DomainSpec& dom, int d0, double support = 0.0);

/// Glued S^1-valued map: prod_i ((x - x_i)/|x - x_i|)^{d_i} e^{i psi} in Omega,
/// u0 outside, with psi discrete-harmonic in Omega matching u0's phase on the
/// exterior nodes. Atoms are snapped to cell centers. Throws InvalidInput
/// if sum d_i != d0 when boundary matching is on.
VectorField2 build_admissible(const RecoveryConfig& cfg, const DomainSpec& dom, bool match_boundary = true);

/// min(|x - x_i| / core, 1) applied around every atom.
VectorField2 truncate_cores(const VectorField2& u, const DiracSum& mu, double core);

struct RecoveryPair {
  VectorField2 u;           // S^1-valued glued map
  VectorField2 u_s;         // cores truncated at 1 - s (Jacobian carrier)
  VectorField2 competitor;  // cores truncated at sqrt(1 - s) (energy competitor)
  DiracSum mu;              // the snapped atoms actually used
};

RecoveryPair build_recovery(const RecoveryConfig& cfg, const DomainSpec& dom);

/// Replaces every atom of degree d, |d| >= 2, by |d| unit charges of the
/// same sign on a segment with spacing delta centred at the atom.
DiracSum split_charges(const DiracSum& mu, double delta);

/// Snapped copy of mu (every atom moved to its cell center).
DiracSum snap_atoms(const DiracSum& mu, const Grid2& g);

}  // namespace fraclab
