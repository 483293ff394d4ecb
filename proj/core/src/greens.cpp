#include "exg/greens.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace exg {

namespace {

std::mutex fftw_mutex;  // FFTW planning is not thread-safe

// inverse DFT of a real, even spectrum given on the full grid; returns real values
std::vector<double> inverse_dft_real(const std::vector<double>& spectrum, int n, int d) {
  const int64_t N = spectrum.size();
  fftw_complex* in = fftw_alloc_complex(N);
  fftw_complex* out = fftw_alloc_complex(N);
  for (int64_t i = 0; i < N; ++i) {
    in[i][0] = spectrum[i];
    in[i][1] = 0.0;
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    int dims[3] = {n, n, n};
    plan = fftw_plan_dft(d, dims, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> result(N);
  for (int64_t i = 0; i < N; ++i) result[i] = out[i][0] / static_cast<double>(N);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

// lambda_k over the full grid, same ordering as the site index
std::vector<double> dispersion(int n, int d) {
  std::vector<double> l1(n);
  for (int k = 0; k < n; ++k) l1[k] = 2.0 * (1.0 - std::cos(2.0 * M_PI * k / n));
  Torus t(n, d);
  const int64_t N = t.sites();
  std::vector<double> lam(N);
  for (int64_t i = 0; i < N; ++i) {
    auto c = t.coords(i);
    double v = 0.0;
    for (int ax = 0; ax < d; ++ax) v += l1[c[ax]];
    lam[i] = v;
  }
  return lam;
}

}  // namespace

GreenTable green_function(int n, int d) {
  Torus t(n, d);
  const int64_t N = t.sites();
  if (N > (int64_t(1) << 24)) throw std::invalid_argument("lattice-too-large");
  auto lam = dispersion(n, d);
  const double n2 = static_cast<double>(n) * n;
  std::vector<double> ghat(N);
  for (int64_t i = 0; i < N; ++i) ghat[i] = 1.0 / (1.0 + n2 * lam[i]);

  GreenTable g;
  g.n = n;
  g.d = d;
  g.values = inverse_dft_real(ghat, n, d);
  g.g0 = g.values[0];

  double s = 0.0, s2 = 0.0, bond = 0.0;
  for (int64_t i = 0; i < N; ++i) {
    s += g.values[i];
    s2 += g.values[i] * g.values[i];
  }
  double resid = 0.0;
  for (int64_t i = 0; i < N; ++i) {
    double lapl = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      double gp = g.values[t.neighbor(i, ax, +1)];
      double gm = g.values[t.neighbor(i, ax, -1)];
      lapl += gp + gm - 2.0 * g.values[i];
      bond += (gp - g.values[i]) * (gp - g.values[i]);
    }
    double lhs = g.values[i] - n2 * lapl;
    double rhs = (i == 0) ? 1.0 : 0.0;
    resid = std::max(resid, std::abs(lhs - rhs));
  }
  g.sum = s;
  g.sq_norm = s2;
  g.bond_energy = bond;
  g.gradient_energy = 2.0 * bond;
  g.residual_inf = resid;
  return g;
}

std::vector<double> heat_kernel(int n, int d, double t) {
  if (t < 0.0) throw std::invalid_argument("heat kernel: t >= 0 required");
  Torus tor(n, d);
  const int64_t N = tor.sites();
  if (N > (int64_t(1) << 24)) throw std::invalid_argument("lattice-too-large");
  auto lam = dispersion(n, d);
  const double n2 = static_cast<double>(n) * n;
  std::vector<double> phat(N);
  for (int64_t i = 0; i < N; ++i) phat[i] = std::exp(-t * n2 * lam[i]);
  return inverse_dft_real(phat, n, d);
}

RwLimits rw_limit_quantities(const GreenTable& table, const ModelParams& params) {
  const double b2 = params.beta_dn * params.beta_dn;
  const double n2 = static_cast<double>(table.n) * table.n;
  const double N = std::pow(static_cast<double>(table.n), table.d);
  RwLimits out;
  out.grad_energy_scaled = n2 * b2 * table.bond_energy;
  out.gn0_scaled = b2 * (table.g0 - 1.0 / N);
  out.gn0_raw_scaled = b2 * table.g0;
  out.sq_norm = table.sq_norm;
  return out;
}

double scaled_bessel_i0(double x) {
  if (x < 0) x = -x;
  if (x <= 20.0) {
    // e^{-x} sum_k (x/2)^{2k} / (k!)^2
    double term = 1.0, sum = 1.0;
    double q = 0.25 * x * x;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum * std::exp(-x);
  }
  // asymptotic: (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  double sum = 1.0, term = 1.0;
  for (int k = 1; k <= 12; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= odd * odd / (k * 8.0 * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

double z3_return_time_integral() {
  auto f = [](double t) {
    double v = scaled_bessel_i0(2.0 * t);
    return v * v * v;
  };
  // Gauss-Legendre 16 points per panel
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589,
                               0.4580167776572274, 0.6178762444026438,
                               0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236,
                               0.1691565193950025, 0.1495959888165767,
                               0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  auto panel = [&](double lo, double hi) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo), acc = 0.0;
    for (int i = 0; i < 8; ++i)
      acc += gw[i] * (f(mid + half * gx[i]) + f(mid - half * gx[i]));
    return acc * half;
  };
  // [0,1] finely, then geometric panels out to T, then asymptotic tail:
  // int_T^inf (4 pi t)^{-3/2} (1 + 3/(16 t)) dt = (4pi)^{-3/2} (2/sqrt(T) + 1/(8 T^{3/2}))
  double total = 0.0;
  for (int i = 0; i < 8; ++i) total += panel(i / 8.0, (i + 1) / 8.0);
  double lo = 1.0;
  const double T = 4096.0;
  while (lo < T) {
    double hi = std::min(lo * 2.0, T);
    total += panel(lo, hi);
    lo = hi;
  }
  double c = std::pow(4.0 * M_PI, -1.5);
  total += c * (2.0 / std::sqrt(T) + 0.125 * std::pow(T, -1.5));
  return total;
}

}  // namespace exg
