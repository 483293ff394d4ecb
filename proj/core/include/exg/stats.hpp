#ifndef EXG_STATS_HPP
#define EXG_STATS_HPP

#include <string>
#include <vector>

namespace exg {

struct EstimateRecord {
  std::string statistic;
  double estimate = 0.0;
  double se = 0.0;      // jackknife standard error
  double ci_lo = 0.0;   // 99% confidence interval
  double ci_hi = 0.0;
  size_t count = 0;
};

double mean(const std::vector<double>& x);
double variance(const std::vector<double>& x);  // unbiased
double covariance(const std::vector<double>& x, const std::vector<double>& y);
double correlation(const std::vector<double>& x, const std::vector<double>& y);

// jackknife SE of the named statistic; >= 30 samples required for variance
// statistics (insufficient-samples otherwise)
EstimateRecord estimate_mean(const std::vector<double>& x, const std::string& name);
EstimateRecord estimate_variance(const std::vector<double>& x, const std::string& name);
EstimateRecord estimate_covariance(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::string& name);

// standardized third/fourth moments with their large-sample standard errors
// sqrt(6/n), sqrt(24/n)
struct GaussianDiagnostics {
  double skewness;
  double skewness_se;
  double kurtosis;  // ~3 for a Gaussian
  double kurtosis_se;
};
GaussianDiagnostics gaussian_diagnostics(const std::vector<double>& x);

}  // namespace exg

#endif
