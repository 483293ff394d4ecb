#include "exg/local_function.hpp"

#include <stdexcept>

namespace exg {

LocalFunction::LocalFunction(int radius,
                             std::function<double(const std::vector<int>&)> f)
    : radius_(radius) {
  if (radius < 0 || radius > 3)
    throw std::invalid_argument("local function: window radius <= 3 required");
  const int w = window();
  table_.resize(1u << w);
  std::vector<int> eta(w);
  for (uint32_t bits = 0; bits < table_.size(); ++bits) {
    for (int i = 0; i < w; ++i) eta[i] = (bits >> i) & 1;
    table_[bits] = f(eta);
  }
  // phi(rho) = sum_bits f(bits) prod_i rho^{eta_i}(1-rho)^{1-eta_i};
  // accumulate polynomial coefficients exactly by convolving the per-site
  // factors rho or (1-rho)
  phi_.assign(w + 1, 0.0);
  for (uint32_t bits = 0; bits < table_.size(); ++bits) {
    std::vector<double> poly{1.0};
    for (int i = 0; i < w; ++i) {
      std::vector<double> next(poly.size() + 1, 0.0);
      if ((bits >> i) & 1) {
        for (size_t k = 0; k < poly.size(); ++k) next[k + 1] += poly[k];  // * rho
      } else {
        for (size_t k = 0; k < poly.size(); ++k) {                        // * (1-rho)
          next[k] += poly[k];
          next[k + 1] -= poly[k];
        }
      }
      poly = std::move(next);
    }
    for (size_t k = 0; k < poly.size(); ++k) phi_[k] += table_[bits] * poly[k];
  }
}

double LocalFunction::eval(const LatticeConfig& config, int64_t x) const {
  const Torus& t = config.torus();
  uint32_t bits = 0;
  for (int i = 0; i < window(); ++i) {
    std::array<int, 3> sh{i - radius_, 0, 0};
    if (config.occupied(t.translate(x, sh))) bits |= 1u << i;
  }
  return table_[bits];
}

double LocalFunction::phi(double rho) const {
  double v = 0.0;
  for (size_t k = phi_.size(); k-- > 0;) v = v * rho + phi_[k];
  return v;
}

double LocalFunction::phi_prime(double rho) const {
  double v = 0.0;
  for (size_t k = phi_.size(); k-- > 1;) v = v * rho + k * phi_[k];
  return v;
}

LocalFunction LocalFunction::centered_occupation(double rho_star) {
  return LocalFunction(0, [rho_star](const std::vector<int>& e) {
    return e[0] - rho_star;
  });
}

LocalFunction LocalFunction::pair_product(double rho_star) {
  return LocalFunction(1, [rho_star](const std::vector<int>& e) {
    return e[1] * e[2] - rho_star * rho_star;  // offsets 0 and +1
  });
}

LocalFunction LocalFunction::hole_pair() {
  return LocalFunction(1, [](const std::vector<int>& e) {
    return e[1] * (1 - e[2]);
  });
}

}  // namespace exg
