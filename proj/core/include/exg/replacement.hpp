#ifndef EXG_REPLACEMENT_HPP
#define EXG_REPLACEMENT_HPP

#include <functional>
#include <vector>

#include "exg/flows.hpp"
#include "exg/model.hpp"

namespace exg {

// quantities of the replacement estimate: V_i, its block-smoothed version,
// the factorized form, and the flow-weighted h table summed in squares
struct ReplacementQuantities {
  double v = 0.0;                 // sum_x etabar_x etabar_{x+e_i} g(x)
  double v_ell = 0.0;             // sum_x etabar_x etabar^l_{x+e_i} g(x)
  double v_ell_factorized = 0.0;  // sum_x leftavg_x(g) rightavg_{x+e_i}
  double sum_h_sq = 0.0;          // sum over unordered bonds of h_{y,z}(g)^2
};

ReplacementQuantities replacement_quantities(
    const LatticeConfig& config, const BlockKernel& kernel, const Flow& flow,
    double rho, int axis, const std::function<double(int64_t)>& g);

// same over a bit-packed state on a tiny torus, with g = delta_0
ReplacementQuantities replacement_quantities_bits(const Torus& t, int64_t state,
                                                  const BlockKernel& kernel,
                                                  const Flow& flow, double rho,
                                                  int axis);

// exact log-MGF of X = sum_i w_i etabar_i (eta i.i.d. Bernoulli(rho)) minus
// the Hoeffding envelope r^2 sigma^2 / 2, sigma^2 = sum w_i^2 / 4, maximized
// over the r grid; sub-Gaussianity means the result is <= 0
struct SubGaussianReport {
  double max_violation;   // max over grid of logMGF - r^2 sigma^2/2
  double sigma_sq;        // Hoeffding variance proxy
  double argmax_r;
};
SubGaussianReport subgaussian_logmgf_check(const std::vector<double>& weights,
                                           double rho, double r_max = 50.0,
                                           int grid_points = 2001);

}  // namespace exg

#endif
