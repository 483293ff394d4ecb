#ifndef EXG_FLOWS_HPP
#define EXG_FLOWS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "exg/torus.hpp"

namespace exg {

// Discrete flow connecting delta_0 to q_ell, supported on the box
// Lambda_{2 ell - 1}.  One value is stored per unordered edge (x, x+e_ax);
// phi(x+e,x) = -phi(x,x+e) by convention.  The flow is the gradient of the
// solution of the zero-flux Poisson problem on the box, hence minimal-energy
// among flows with this support.
struct Flow {
  int ell = 1;
  int d = 1;
  int m = 1;  // box side 2*ell-1
  // edge[ax]: values on edges along axis ax, indexed by the lower endpoint's
  // box coordinates with x[ax] in [0, m-1)
  std::array<std::vector<double>, 3> edge;
  double energy_bond = 0.0;     // sum over unordered edges of phi^2
  double energy = 0.0;          // ordered-pair convention: 2 * energy_bond
  double divergence_residual = 0.0;

  // value on the box edge (x, x + e_ax); x given in box coordinates
  double phi_box(const std::array<int, 3>& x, int ax) const;

  // phi(u, v) for torus sites u, v; zero unless u, v are adjacent and both lie
  // in Lambda_{2 ell - 1} (coordinates in [0, m) as wrapped into [0, n))
  double phi_torus(const Torus& t, int64_t u, int64_t v) const;
};

Flow build_flow(int ell, int d);
// validates that the enclosing torus can contain the support
Flow build_flow(int ell, int d, int box_n);

// explicit 1-d construction: phi(j, j+1) = sum_{z <= j} (delta_0 - q_ell)(z)
std::vector<double> cumulative_flow_1d(int ell);

}  // namespace exg

#endif
