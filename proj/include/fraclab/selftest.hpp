#pragma once

#include <string>
#include <vector>

namespace fraclab {

struct SelfCheck {
  std::string name;
  bool passed = false;
  double error = 0.0;   // measured discrepancy
  double bound = 0.0;   // allowed discrepancy
};

/// Fast oracle comparisons on grids of at most 24^2 nodes: FFT paths against
/// direct sums, Jacobian forms against each other, integer degrees of the
/// vortex blocks and flat norms with closed-form values.
std::vector<SelfCheck> run_selftest();

}  // namespace fraclab
