#ifndef EXG_LOCAL_FUNCTION_HPP
#define EXG_LOCAL_FUNCTION_HPP

#include <functional>
#include <vector>

#include "exg/model.hpp"

namespace exg {

// A local function f(eta) of d=1 window {-radius..+radius} around the origin,
// tabulated over all 2^(2r+1) window configurations.  Bit i of the table
// index is the occupancy at offset i - radius.
class LocalFunction {
 public:
  LocalFunction(int radius, std::function<double(const std::vector<int>&)> f);

  int radius() const { return radius_; }
  int window() const { return 2 * radius_ + 1; }

  double value(uint32_t window_bits) const { return table_[window_bits]; }

  // evaluate on a full configuration, window translated to site x
  double eval(const LatticeConfig& config, int64_t x) const;

  // phi_f(rho) = E_{nu_rho}[f] as an exact polynomial in rho
  // (coefficient k multiplies rho^k)
  const std::vector<double>& phi_coeffs() const { return phi_; }
  double phi(double rho) const;
  double phi_prime(double rho) const;

  // common cases
  static LocalFunction centered_occupation(double rho_star);  // eta_0 - rho*
  static LocalFunction pair_product(double rho_star);         // eta_0 eta_1 - rho*^2
  static LocalFunction hole_pair();                           // eta_0 (1 - eta_1)

 private:
  int radius_;
  std::vector<double> table_;
  std::vector<double> phi_;  // polynomial coefficients in rho
};

}  // namespace exg

#endif
