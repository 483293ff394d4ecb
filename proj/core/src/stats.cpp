#include "exg/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace exg {

namespace {
constexpr double kZ99 = 2.5758293035489004;  // two-sided 99%

EstimateRecord jackknife(const std::vector<double>& x, const std::vector<double>& y,
                         bool use_y, bool central_product, const std::string& name) {
  // jackknife over leave-one-out replicates of mean/variance/covariance
  const size_t n = x.size();
  double sx = 0.0, sy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += use_y ? y[i] : 0.0;
    sxy += use_y ? x[i] * y[i] : x[i] * x[i];
  }
  auto stat_without = [&](size_t drop) {
    double m = n - 1.0;
    double mx = (sx - x[drop]) / m;
    if (!central_product) return mx;
    double my = use_y ? (sy - y[drop]) / m : mx;
    double pxy = sxy - (use_y ? x[drop] * y[drop] : x[drop] * x[drop]);
    return (pxy - m * mx * my) / (m - 1.0);
  };
  double full;
  {
    double mx = sx / n;
    if (!central_product) {
      full = mx;
    } else {
      double my = use_y ? sy / n : mx;
      full = (sxy - n * mx * my) / (n - 1.0);
    }
  }
  double msub = 0.0;
  std::vector<double> loo(n);
  for (size_t i = 0; i < n; ++i) {
    loo[i] = stat_without(i);
    msub += loo[i];
  }
  msub /= n;
  double var_jk = 0.0;
  for (size_t i = 0; i < n; ++i) var_jk += (loo[i] - msub) * (loo[i] - msub);
  var_jk *= (n - 1.0) / n;
  EstimateRecord rec;
  rec.statistic = name;
  rec.estimate = full;
  rec.se = std::sqrt(var_jk);
  rec.ci_lo = full - kZ99 * rec.se;
  rec.ci_hi = full + kZ99 * rec.se;
  rec.count = n;
  return rec;
}
}  // namespace

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / x.size();
}

double variance(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1.0);
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: size mismatch");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / (x.size() - 1.0);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  return covariance(x, y) / std::sqrt(variance(x) * variance(y));
}

EstimateRecord estimate_mean(const std::vector<double>& x, const std::string& name) {
  if (x.size() < 2) throw std::invalid_argument("insufficient-samples");
  return jackknife(x, x, false, false, name);
}

EstimateRecord estimate_variance(const std::vector<double>& x, const std::string& name) {
  if (x.size() < 30) throw std::invalid_argument("insufficient-samples: need >= 30");
  return jackknife(x, x, false, true, name);
}

EstimateRecord estimate_covariance(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   const std::string& name) {
  if (x.size() < 30) throw std::invalid_argument("insufficient-samples: need >= 30");
  if (x.size() != y.size()) throw std::invalid_argument("covariance: size mismatch");
  return jackknife(x, y, true, true, name);
}

GaussianDiagnostics gaussian_diagnostics(const std::vector<double>& x) {
  const size_t n = x.size();
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  GaussianDiagnostics g;
  g.skewness = m3 / std::pow(m2, 1.5);
  g.skewness_se = std::sqrt(6.0 / n);
  g.kurtosis = m4 / (m2 * m2);
  g.kurtosis_se = std::sqrt(24.0 / n);
  return g;
}

}  // namespace exg
