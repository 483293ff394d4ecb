#include "exg/model.hpp"

#include <cmath>
#include <stdexcept>

namespace exg {

double reaction_F(double rho, double a, double b, double lambda) {
  return (a + lambda * rho) * (1.0 - rho) - b * rho;
}

double solve_rho_star(double a, double b, double lambda) {
  if (!(a > 0.0) || !(b > 0.0) || !(lambda > -a))
    throw std::invalid_argument("invalid-parameters: need a>0, b>0, lambda>-a");
  // F(0)=a>0, F(1)=-b<0 brackets the unique root; bisection avoids the
  // cancellation the quadratic formula hits near lambda=0
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    if (reaction_F(mid, a, b, lambda) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

ModelParams ModelParams::create(int n, int d, double a, double b, double lambda) {
  if (n < 3) throw std::invalid_argument("invalid-parameters: n >= 3 required");
  if (d < 1 || d > 3) throw std::invalid_argument("invalid-parameters: d in {1,2,3}");
  ModelParams p;
  p.n = n;
  p.d = d;
  p.a = a;
  p.b = b;
  p.lambda = lambda;
  p.rho_star = solve_rho_star(a, b, lambda);
  p.chi_star = p.rho_star * (1.0 - p.rho_star);
  p.fprime_star = lambda - a - b - 2.0 * lambda * p.rho_star;
  p.g_star = reaction_F(p.rho_star, a, b, lambda) + 2.0 * b * p.rho_star;
  switch (d) {
    case 1: p.beta_dn = std::sqrt(static_cast<double>(n)); break;
    case 2: p.beta_dn = n / std::sqrt(std::log(static_cast<double>(n))); break;
    default: p.beta_dn = n; break;
  }
  return p;
}

LatticeConfig LatticeConfig::bernoulli(const Torus& t, double rho, Philox& rng) {
  LatticeConfig c(t);
  const int64_t N = t.sites();
  for (int64_t s = 0; s < N; ++s)
    if (rng.uniform() < rho) c.flip(s);
  return c;
}

LatticeConfig LatticeConfig::all_ones(const Torus& t) {
  LatticeConfig c(t);
  for (int64_t s = 0; s < t.sites(); ++s) c.flip(s);
  return c;
}

int64_t LatticeConfig::count_particles() const {
  int64_t total = 0;
  for (uint64_t w : words_) total += __builtin_popcountll(w);
  return total;
}

double flip_rate(const LatticeConfig& config, int64_t x, const ModelParams& p) {
  const Torus& t = config.torus();
  int nb = 0;
  for (int ax = 0; ax < t.d; ++ax)
    nb += config.occ(t.neighbor(x, ax, +1)) + config.occ(t.neighbor(x, ax, -1));
  double birth = p.a + p.lambda / (2.0 * p.d) * nb;
  return config.occupied(x) ? p.b : birth;
}

double flip_rate(const LatticeConfig& config, int64_t x, const ModelParams& p,
                 const NeighborTable& nbr) {
  int nb = 0;
  for (int ax = 0; ax < p.d; ++ax)
    nb += config.occ(nbr.plus[ax][x]) + config.occ(nbr.minus[ax][x]);
  double birth = p.a + p.lambda / (2.0 * p.d) * nb;
  return config.occupied(x) ? p.b : birth;
}

double rate_decomposition_rhs(const LatticeConfig& config, int64_t x,
                              const ModelParams& p) {
  const Torus& t = config.torus();
  const double rho = p.rho_star;
  double ex = config.occ(x) - rho;
  double nb_sum = 0.0;
  for (int ax = 0; ax < t.d; ++ax) {
    nb_sum += (config.occ(t.neighbor(x, ax, +1)) - rho);
    nb_sum += (config.occ(t.neighbor(x, ax, -1)) - rho);
  }
  double inv2d = 1.0 / (2.0 * p.d);
  return -(p.a + p.lambda * rho + p.b) * ex +
         p.lambda * (1.0 - rho) * inv2d * nb_sum -
         p.lambda * inv2d * nb_sum * ex;
}

BlockKernel BlockKernel::create(int ell, int d, int n) {
  if (ell < 1) throw std::invalid_argument("block kernel: ell >= 1 required");
  if (2 * ell >= n) throw std::invalid_argument("block-too-large: ell < n/2 required");
  BlockKernel k;
  k.ell = ell;
  k.d = d;
  k.p1.assign(ell, 1.0 / ell);
  k.q1.assign(2 * ell - 1, 0.0);
  for (int i = 0; i < ell; ++i)
    for (int j = 0; j < ell; ++j) k.q1[i + j] += 1.0 / (static_cast<double>(ell) * ell);
  return k;
}

double BlockKernel::p(const std::array<int, 3>& y) const {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    if (y[i] < 0 || y[i] >= ell) return 0.0;
    v *= p1[y[i]];
  }
  return v;
}

double BlockKernel::q(const std::array<int, 3>& y) const {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    if (y[i] < 0 || y[i] >= 2 * ell - 1) return 0.0;
    v *= q1[y[i]];
  }
  return v;
}

namespace {
template <typename W, typename F>
void for_cube(int side, int d, const W& w1, F&& f) {
  std::array<int, 3> y{0, 0, 0};
  if (d == 1) {
    for (y[0] = 0; y[0] < side; ++y[0]) f(y, w1[y[0]]);
  } else if (d == 2) {
    for (y[0] = 0; y[0] < side; ++y[0])
      for (y[1] = 0; y[1] < side; ++y[1]) f(y, w1[y[0]] * w1[y[1]]);
  } else {
    for (y[0] = 0; y[0] < side; ++y[0])
      for (y[1] = 0; y[1] < side; ++y[1])
        for (y[2] = 0; y[2] < side; ++y[2]) f(y, w1[y[0]] * w1[y[1]] * w1[y[2]]);
  }
}
}  // namespace

BlockAverages block_averages(const LatticeConfig& config, int64_t x,
                             const BlockKernel& kernel, double rho,
                             const std::function<double(int64_t)>& g) {
  const Torus& t = config.torus();
  BlockAverages out{0.0, 0.0, 0.0};
  for_cube(kernel.ell, kernel.d, kernel.p1, [&](const std::array<int, 3>& y, double w) {
    std::array<int, 3> neg{-y[0], -y[1], -y[2]};
    int64_t xm = t.translate(x, neg);
    int64_t xp = t.translate(x, y);
    out.left += w * (config.occ(xm) - rho) * (g ? g(xm) : 1.0);
    out.right += w * (config.occ(xp) - rho);
  });
  for_cube(2 * kernel.ell - 1, kernel.d, kernel.q1, [&](const std::array<int, 3>& y, double w) {
    out.q_avg += w * (config.occ(t.translate(x, y)) - rho);
  });
  return out;
}

}  // namespace exg
