#pragma once

#include <stdexcept>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/field.hpp"
#include "fraclab/riesz.hpp"
#include "fraclab/topology.hpp"
#include "fraclab/vortex.hpp"

namespace fraclab {

enum class FlatVariant {
  open,    // test functions vanish on the region boundary
  closed,  // free boundary values
};

enum class FlatBall {
  paper,   // sup|phi| + Lip(phi) <= 1
  simple,  // sup|phi| <= 1 and Lip(phi) <= 1
};

/// A signed measure lumped onto the nodes of `region`. Lipschitz bounds are
/// imposed on the 8-neighbour edges between region nodes.
struct FlatInput {
  Grid2 grid;
  Mask region;
  std::vector<double> mass;  // per node
  FlatVariant variant = FlatVariant::closed;
  FlatBall ball = FlatBall::paper;

  FlatInput(const Grid2& g, Mask region, FlatVariant v = FlatVariant::closed, FlatBall b = FlatBall::paper);

  /// Cell densities times h^2, a quarter to each corner in the region
  /// (shared among the in-region corners when some are outside).
  void add_cells(const JacobianField& density, double scale = 1.0);
  /// Node densities times h^2 on region nodes.
  void add_nodes(const ScalarField& density, double scale = 1.0);
  /// Point mass at the nearest node; throws InvalidInput outside the region.
  void add_atom(Point x, double m);
  void add_atoms(const DiracSum& mu, double scale);
  double total_mass() const;
};

struct FlatOptions {
  double tol = 1e-6;   // absolute gap between the certified bounds
  long max_iter = 400000;  // PDHG iterations summed over all inner solves
};

struct FlatNormResult {
  double value = 0.0;  // certified lower bound <mass, phi>
  double upper = 0.0;  // certified upper bound from the dual flow
  double primal_dual_gap = 0.0;
  ScalarField phi;     // feasible test function attaining `value`
  double sup = 0.0;    // max |phi|
  double lipschitz = 0.0;  // max edge slope of phi
  long iterations = 0;

  explicit FlatNormResult(const Grid2& g) : phi(g) {}
};

class FlatNormError : public std::runtime_error {
 public:
  FlatNormError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value(best_value), gap(gap) {}
  double best_value;
  double gap;
};

/// max <mass, phi> over the chosen ball by diagonally preconditioned
/// primal-dual iterations. The paper ball is the union of the boxes
/// {|phi| <= lambda, Lip <= 1 - lambda}; its value is concave in lambda and
/// maximised by golden-section search with warm starts. Throws
/// FlatNormError when the certified gap stays above tol.
FlatNormResult flat_norm(const FlatInput& input, const FlatOptions& opts = {});

/// Flat(closure of Omega) distance between J(I~u) (or J(Iu)) and pi mu.
FlatNormResult flat_distance_jacobian_to_dirac(const VectorField2& u, const FracParams& params, const DiracSum& mu,
                                               const DomainSpec& dom, const FlatOptions& opts = {},
                                               Normalization norm = Normalization::normalized);

}  // namespace fraclab
