#ifndef EXG_MODEL_HPP
#define EXG_MODEL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "exg/rng.hpp"
#include "exg/torus.hpp"

namespace exg {

// Reaction function F(rho) = (a + lambda*rho)(1-rho) - b*rho and its root
// rho_* in (0,1).
double reaction_F(double rho, double a, double b, double lambda);
double solve_rho_star(double a, double b, double lambda);

struct ModelParams {
  int n = 0;
  int d = 1;
  double a = 1.0;
  double b = 1.0;
  double lambda = 0.0;

  // derived
  double rho_star = 0.5;
  double chi_star = 0.25;     // rho*(1-rho*)
  double fprime_star = -2.0;  // F'(rho*)
  double g_star = 1.0;        // F(rho*) + 2 b rho* = 2 b rho*
  double beta_dn = 1.0;       // sqrt(n), n/sqrt(log n), n

  static ModelParams create(int n, int d, double a, double b, double lambda);

  Torus torus() const { return Torus(n, d); }
  double F(double rho) const { return reaction_F(rho, a, b, lambda); }
  // uniform bound on flip rates, used for thinning
  double flip_rate_bound() const { return a + (lambda > 0 ? lambda : 0.0) + b; }
  // |lambda| beyond the perturbative window the analysis assumes; reported,
  // never enforced
  bool outside_perturbative_regime() const {
    double m = a < b ? a : b;
    return (lambda > 0 ? lambda : -lambda) > 0.25 * m;
  }
};

// Occupation configuration, bit packed.  Mutable, single-owner.
class LatticeConfig {
 public:
  LatticeConfig(const Torus& t) : torus_(t), words_((t.sites() + 63) / 64, 0) {}

  static LatticeConfig bernoulli(const Torus& t, double rho, Philox& rng);
  static LatticeConfig all_ones(const Torus& t);

  const Torus& torus() const { return torus_; }
  int64_t sites() const { return torus_.sites(); }
  int64_t particle_count() const { return particle_count_; }

  bool occupied(int64_t s) const {
    return (words_[static_cast<uint64_t>(s) >> 6] >> (s & 63)) & 1u;
  }
  int occ(int64_t s) const { return occupied(s) ? 1 : 0; }

  void flip(int64_t s) {
    uint64_t& w = words_[static_cast<uint64_t>(s) >> 6];
    uint64_t bit = 1ull << (s & 63);
    particle_count_ += (w & bit) ? -1 : +1;
    w ^= bit;
  }

  // swap occupancies of x and y (no-op when equal)
  void swap_sites(int64_t x, int64_t y) {
    if (occupied(x) != occupied(y)) {
      words_[static_cast<uint64_t>(x) >> 6] ^= 1ull << (x & 63);
      words_[static_cast<uint64_t>(y) >> 6] ^= 1ull << (y & 63);
    }
  }

  int64_t count_particles() const;  // recount from the words

 private:
  Torus torus_;
  std::vector<uint64_t> words_;
  int64_t particle_count_ = 0;
};

// c_x(eta) = (a + lambda/(2d) * sum_{|y-x|=1} eta_y)(1 - eta_x) + b eta_x
double flip_rate(const LatticeConfig& config, int64_t x, const ModelParams& p);
double flip_rate(const LatticeConfig& config, int64_t x, const ModelParams& p,
                 const NeighborTable& nbr);

// Exact decomposition of c_x(1-2eta_x) into degree-one and degree-two parts:
//   c_x(1-2eta_x) = -(a + lambda rho* + b) etabar_x
//                   + lambda(1-rho*)/(2d) sum_nbr etabar_y
//                   - lambda/(2d) sum_nbr etabar_y etabar_x
// Returns the right-hand side; equals flip_rate * (1-2eta_x) identically.
double rate_decomposition_rhs(const LatticeConfig& config, int64_t x,
                              const ModelParams& p);

// Block kernels p_ell (uniform on the cube Lambda_ell) and q_ell = p_ell*p_ell.
// Following the paper's corner convention Lambda_{x,ell} = {y : 0 <= y_i-x_i <=
// ell-1}, so q_ell is supported on Lambda_{2ell-1} and centered at ell-1 in
// each coordinate, not at 0.
struct BlockKernel {
  int ell = 1;
  int d = 1;
  std::vector<double> p1;  // 1-d factor of p_ell, size ell
  std::vector<double> q1;  // 1-d factor of q_ell, size 2*ell-1

  static BlockKernel create(int ell, int d, int n);  // throws if ell >= n/2

  double p(const std::array<int, 3>& y) const;  // product over axes
  double q(const std::array<int, 3>& y) const;
};

struct BlockAverages {
  double left;   // sum_y p(y) etabar_{x-y} g(x-y)
  double right;  // sum_y p(y) etabar_{x+y}
  double q_avg;  // sum_y q(y) etabar_{x+y}
};

BlockAverages block_averages(const LatticeConfig& config, int64_t x,
                             const BlockKernel& kernel, double rho,
                             const std::function<double(int64_t)>& g);

}  // namespace exg

#endif
