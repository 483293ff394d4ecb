#ifndef EXG_LIMITS_HPP
#define EXG_LIMITS_HPP

#include <optional>
#include <vector>

#include "exg/model.hpp"

namespace exg {

// Fourier-mode view of the limiting fluctuation SPDE
//   dy_k = mu_k y_k dt + sigma_k dB_k,  y_k(0) ~ N(0, chi)
// in the real cosine basis {1, sqrt(2) cos(2 pi k x)}; sine modes carry no
// weight against delta_0 or any even mollifier and are dropped.
struct OUMode {
  double drift;      // mu_k = -4 pi^2 k^2 + F'(rho*)
  double noise_var;  // sigma_k^2 = 8 pi^2 k^2 chi + G  (k=0: G)
};

OUMode ou_mode(const ModelParams& params, int k);

// Cov(y_k(u), y_k(v)) for the OU mode started at variance chi
double ou_mode_covariance(const OUMode& mode, double chi, double u, double v);

// closed-form double integral int_0^t int_0^s Cov(y_k(u),y_k(v)) du dv
double ou_mode_double_integral(const OUMode& mode, double chi, double t, double s);

// standard bump mollifier on (-1,1), J(u) = c exp(-1/(1-u^2))
struct Mollifier {
  static double bump(double u);   // unnormalized
  static double bump_mass();
  // jhat(theta) = int J(v) cos(2 pi theta v) dv / mass, panel Gauss quadrature
  static double cosine_transform(double theta);
};

struct AlphaValue {
  double value;
  double tail_bound;  // rigorous bound on the truncated remainder
};

// Covariance alpha(t,s) of the limiting occupation-time process Z_t
// (mollified version when epsilon is set):
//   alpha(t,s) = sum_k chat_k^2 * intint Cov(y_k),  chat_0 = 1,
//   chat_k = sqrt(2) jhat(k eps)   (exact mode: jhat == 1).
// In the exact mode the dominant 2 chi min(s,t)/m_k part of the k-tail is
// resummed in closed form via sum_{k>K} 1/(k^2+a^2), leaving an O(K^-3)
// remainder; in the mollified mode chat^2 <= c^2 majorizes the tail.
class AlphaOracle {
 public:
  explicit AlphaOracle(const ModelParams& params,
                       std::optional<double> epsilon = std::nullopt,
                       int truncation = 10000);

  AlphaValue evaluate(double t, double s) const;
  // value; throws "truncation-insufficient" when the tail bound exceeds tol
  double operator()(double t, double s, double tol = 1e-6) const;

  double mode_weight_sq(int k) const { return weight_sq_[k]; }
  int truncation() const { return K_; }
  bool mollified() const { return epsilon_.has_value(); }
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  std::optional<double> epsilon_;
  int K_;
  std::vector<double> weight_sq_;  // chat_k^2, k = 0..K
};

// Sigma matrix with entries alpha(t_i, t_j), row-major
std::vector<double> covariance_matrix(const AlphaOracle& oracle,
                                      const std::vector<double>& times,
                                      double tol = 1e-6);

// d=2 limit variance chi(rho*) t / pi of the occupation-time Brownian limit
double bm_variance_2d(double t, const ModelParams& params);
// the same quantity predicted from the Green-function gradient limit,
// 2 chi * (n^2 beta^2 sum over bonds of (grad g)^2) * t
double bm_variance_2d_green_prediction(double t, const ModelParams& params,
                                       double grad_energy_scaled);

}  // namespace exg

#endif
