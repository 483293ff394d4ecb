#ifndef EXG_EXACT_HPP
#define EXG_EXACT_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "exg/flows.hpp"
#include "exg/model.hpp"
#include "exg/rng.hpp"

namespace exg {

// Full 2^(n^d)-dimensional generator for tiny systems.  State index is the
// occupancy bit pattern (bit s = site s in canonical order), which fixes the
// basis once and for all.  Entry (i,j) is the jump rate i -> j; diagonals
// make the rows sum to zero.
struct GeneratorMatrix {
  ModelParams params;
  int64_t dim = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> exclusion;  // unaccelerated L_ex
  Eigen::SparseMatrix<double, Eigen::RowMajor> glauber;    // L_r

  Eigen::SparseMatrix<double, Eigen::RowMajor> combined() const {
    double n2 = static_cast<double>(params.n) * params.n;
    return (n2 * exclusion + glauber).eval();
  }
  int sites() const;
  int occ(int64_t state, int site) const { return (state >> site) & 1; }
};

GeneratorMatrix build_generator(const ModelParams& params);  // n^d <= 14

// Bernoulli(rho) product weights over all configurations
Eigen::VectorXd product_measure(int sites, double rho);

// mu_t = mu0 exp(tL) as a row vector, substepped truncated-Taylor action
// with remainder control 1e-10 (clamped tiny negatives, renormalized)
Eigen::VectorXd evolve_distribution(const Eigen::SparseMatrix<double, Eigen::RowMajor>& L,
                                    const Eigen::VectorXd& mu0, double t,
                                    double tol = 1e-10);

// independent oracle: uniformization series mu0 e^{tL} = e^{-Lam t} sum Pois_m mu0 P^m
Eigen::VectorXd evolve_uniformization(const Eigen::SparseMatrix<double, Eigen::RowMajor>& L,
                                      const Eigen::VectorXd& mu0, double t,
                                      double tol = 1e-12);

struct AdjointOneResult {
  Eigen::VectorXd lstar_one;   // (L* 1)(eta), adjoint w.r.t. nu_{rho*}
  Eigen::VectorXd pair_sum;    // lambda/(2 d rho*) sum_x sum_{|y-x|=1} etabar_x etabar_y
  double max_abs_diff = 0.0;
};
AdjointOneResult adjoint_one(const GeneratorMatrix& gen);

// H(mu|nu) = sum mu log(mu/nu), 0 log 0 = 0; throws on absolute-continuity failure
double relative_entropy(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu);

struct DirichletForms {
  double exclusion;  // int Gamma_ex(f) d nu_{rho*}
  double glauber;    // int Gamma_r(f) d nu_{rho*}
};
DirichletForms dirichlet_forms(const GeneratorMatrix& gen, const Eigen::VectorXd& f);

// empirical log-Sobolev ratio sup H(f nu|nu) / int Gamma_r(sqrt f) d nu over
// random densities exp(Gaussian potential) plus near-degenerate ones
double lsi_constant(const GeneratorMatrix& gen, int samples, uint64_t seed);

struct MeanCurve {
  std::vector<double> times;
  std::vector<double> m;           // site-independent E[eta_x(t)]
  std::vector<double> residual;    // m'(t) - F(m(t))
  double site_dependence = 0.0;    // max_t max_x |E[eta_x] - m|
  double sup_deviation = 0.0;      // sup_t |m - rho*|
};
MeanCurve mean_curve(const GeneratorMatrix& gen, const std::vector<double>& t_grid);

struct CorrelationBound {
  double sup_abs_cov = 0.0;     // sup over grid, x != y
  double normalized = 0.0;      // n^d * sup
};
CorrelationBound two_point_correlation(const GeneratorMatrix& gen,
                                       const std::vector<double>& t_grid);

struct ReplacementCheck {
  double worst_margin;   // min over sampled densities of RHS - LHS
  double lhs_at_one;     // LHS for f == 1 (mean-zero check)
};
// LHS = int (V_i - V_i^l)(g) f dnu, RHS = gamma int Gamma_ex(sqrt f) dnu
//        + 1/(2 gamma) int sum_bonds h^2 f dnu, with g = delta_0
ReplacementCheck replacement_inequality_check(const GeneratorMatrix& gen,
                                              const Flow& flow, int ell, double gamma,
                                              int samples, uint64_t seed);

}  // namespace exg

#endif
