#ifndef EXG_GREENS_HPP
#define EXG_GREENS_HPP

#include <cstdint>
#include <vector>

#include "exg/model.hpp"
#include "exg/torus.hpp"

namespace exg {

// Resolvent Green function of the n^2-accelerated walk on T_n^d:
//   (1 - n^2 Delta_D) g_n = delta_0,   ghat(k) = 1 / (1 + n^2 lambda_k),
// lambda_k = sum_i 2(1 - cos(2 pi k_i / n)).
struct GreenTable {
  int n = 0;
  int d = 0;
  std::vector<double> values;     // g_n(x), canonical site order
  double g0 = 0.0;                // g_n(0)
  double sq_norm = 0.0;           // sum_x g_n(x)^2
  double bond_energy = 0.0;       // sum over unordered bonds of (g(x)-g(y))^2
  double gradient_energy = 0.0;   // ordered-pair convention: 2 * bond_energy
  double residual_inf = 0.0;      // max_x |(1 - n^2 Delta_D) g - delta_0|
  double sum = 0.0;               // sum_x g_n(x), = 1 exactly in the resolvent

  double at(int64_t site) const { return values[site]; }
};

GreenTable green_function(int n, int d);  // throws lattice-too-large above 2^24 sites

// p_n(t, .) = exp(t n^2 Delta_D) delta_0, computed mode-wise
std::vector<double> heat_kernel(int n, int d, double t);

// Scaled quantities of the random-walk lemma.  Both convergent quantities use
// the unordered bond sum and the point value with the conserved k=0 mode
// removed; the raw point value converges only like 1/log n in d=2 and is
// reported alongside.
struct RwLimits {
  double grad_energy_scaled;  // n^2 beta^2 * bond_energy
  double gn0_scaled;          // beta^2 * (g(0) - N^{-1})
  double gn0_raw_scaled;      // beta^2 * g(0)
  double sq_norm;             // sum g^2
};

RwLimits rw_limit_quantities(const GreenTable& table, const ModelParams& params);

// integral of the Z^3 walk return probability, int_0^inf p(t,0) dt,
// via (e^{-2t} I_0(2t))^3: series-based scaled Bessel on [0,1], panel
// quadrature on [1,T], asymptotic tail beyond
double z3_return_time_integral();

// e^{-x} I_0(x), series for small x, asymptotic expansion for large
double scaled_bessel_i0(double x);

}  // namespace exg

#endif
