#ifndef EXG_RATES_HPP
#define EXG_RATES_HPP

#include <optional>
#include <vector>

#include "exg/limits.hpp"
#include "exg/model.hpp"

namespace exg {

// finite-dimensional moderate-deviation rate problem: times, targets, and the
// covariance matrix Sigma_{ij} = alpha(t_i, t_j)
struct RateProblem {
  std::vector<double> times;
  std::vector<double> gamma;
  std::vector<double> sigma;  // row-major k x k
};

RateProblem make_rate_problem(const AlphaOracle& oracle, std::vector<double> times,
                              std::vector<double> gamma);

// (1/2) gamma^T Sigma^{-1} gamma through a symmetric eigendecomposition with
// eigenvalue floor 1e-12 * trace; targets outside the numerical range give
// +infinity
double rate_I(const RateProblem& problem);

// Q_0(mu_0) = ||mu_0||^2 / (2 chi) in the coefficient norm
double rate_Q0(const std::vector<double>& mu0_coeffs, double chi);

// Galerkin path: cosine modes 0..K_s, piecewise-linear in time on M intervals
// of [0,T]; mu[k][j] = coefficient of mode k at node j (j = 0..M)
struct GalerkinPath {
  double T = 1.0;
  int K_s = 1;
  int M = 1;
  std::vector<std::vector<double>> mu;
};

// Q_dyn = sum_k int_0^T (mudot_k - drift_k mu_k)^2 / (2 sigma_k^2) dt with the
// per-interval integral of the piecewise-linear path evaluated in closed form
double rate_Qdyn(const GalerkinPath& path, const ModelParams& params);

struct ContractionResult {
  double variational;  // min Q_0 + Q_dyn subject to the occupation constraints
  double quadratic;    // (1/2) gamma^T Sigma_eps^{-1} gamma from the oracle
  double gap;          // variational - quadratic (>= 0 up to round-off)
};

// Minimizes Q_0 + Q_dyn over Galerkin paths subject to
//   int_0^{t_i} <mu_s, J_eps> ds = gamma_i   (exact mode: J replaced by the
//   K_s-truncated delta), via per-mode tridiagonal KKT solves and a Schur
//   complement over the constraints.  Each t_i must lie on the time grid.
ContractionResult contraction_check(const ModelParams& params,
                                    const std::vector<double>& t_points,
                                    const std::vector<double>& gamma,
                                    std::optional<double> epsilon, int K_s, int M,
                                    double T = 1.0);

}  // namespace exg

#endif
