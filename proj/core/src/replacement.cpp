#include "exg/replacement.hpp"

#include <cmath>

namespace exg {

namespace {

// iterate the cube Lambda_side with per-axis weights w1
template <typename F>
void for_cube(int side, int d, const std::vector<double>& w1, F&& f) {
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

template <typename Occ>
ReplacementQuantities compute(const Torus& t, const Occ& occ, const BlockKernel& kernel,
                              const Flow& flow, double rho, int axis,
                              const std::function<double(int64_t)>& g) {
  const int64_t N = t.sites();
  const int d = t.d;
  auto gv = [&](int64_t s) { return g ? g(s) : 1.0; };
  auto eb = [&](int64_t s) { return occ(s) - rho; };

  ReplacementQuantities out;

  // smoothed field etabar^l once per site
  std::vector<double> ebl(N, 0.0);
  for (int64_t x = 0; x < N; ++x) {
    double acc = 0.0;
    for_cube(2 * kernel.ell - 1, d, kernel.q1, [&](const std::array<int, 3>& y, double w) {
      acc += w * eb(t.translate(x, y));
    });
    ebl[x] = acc;
  }
  // left/right p-averages
  std::vector<double> left(N, 0.0), right(N, 0.0);
  for (int64_t x = 0; x < N; ++x) {
    double l = 0.0, r = 0.0;
    for_cube(kernel.ell, d, kernel.p1, [&](const std::array<int, 3>& y, double w) {
      std::array<int, 3> neg{-y[0], -y[1], -y[2]};
      int64_t xm = t.translate(x, neg);
      l += w * eb(xm) * gv(xm);
      r += w * eb(t.translate(x, y));
    });
    left[x] = l;
    right[x] = r;
  }

  for (int64_t x = 0; x < N; ++x) {
    int64_t xp = t.neighbor(x, axis, +1);
    out.v += eb(x) * eb(xp) * gv(x);
    out.v_ell += eb(x) * ebl[xp] * gv(x);
    out.v_ell_factorized += left[x] * right[xp];
  }

  // h_{y,z}(g) = sum_x phi(y-x, z-x) etabar_{x-e_i} g(x-e_i); only box edges
  // along the bond's own axis contribute.  Sum h^2 over unordered bonds.
  const int m = flow.m;
  for (int ax = 0; ax < d; ++ax) {
    // enumerate box edges (u, u+e_ax) with their flow values
    std::array<int, 3> u{0, 0, 0};
    std::array<int, 3> extents{1, 1, 1};
    for (int i = 0; i < d; ++i) extents[i] = (i == ax) ? m - 1 : m;
    int64_t tot = 1;
    for (int i = 0; i < d; ++i) tot *= extents[i];
    std::vector<std::pair<std::array<int, 3>, double>> edges;
    edges.reserve(tot);
    for (int64_t e = 0; e < tot; ++e) {
      int64_t r = e;
      for (int j = d - 1; j >= 0; --j) {
        u[j] = static_cast<int>(r % extents[j]);
        r /= extents[j];
      }
      double val = flow.phi_box(u, ax);
      if (val != 0.0) edges.emplace_back(u, val);
    }
    for (int64_t y = 0; y < N; ++y) {
      double h = 0.0;
      for (const auto& [uu, val] : edges) {
        std::array<int, 3> neg{-uu[0], -uu[1], -uu[2]};
        int64_t x = t.translate(y, neg);          // y - u
        int64_t xi = t.neighbor(x, axis, -1);     // x - e_i
        h += val * eb(xi) * gv(xi);
      }
      out.sum_h_sq += h * h;
    }
  }
  return out;
}

}  // namespace

ReplacementQuantities replacement_quantities(
    const LatticeConfig& config, const BlockKernel& kernel, const Flow& flow,
    double rho, int axis, const std::function<double(int64_t)>& g) {
  return compute(config.torus(), [&](int64_t s) { return config.occ(s); }, kernel,
                 flow, rho, axis, g);
}

ReplacementQuantities replacement_quantities_bits(const Torus& t, int64_t state,
                                                  const BlockKernel& kernel,
                                                  const Flow& flow, double rho,
                                                  int axis) {
  std::function<double(int64_t)> delta0 = [](int64_t s) { return s == 0 ? 1.0 : 0.0; };
  return compute(t, [&](int64_t s) { return static_cast<int>((state >> s) & 1); },
                 kernel, flow, rho, axis, delta0);
}

SubGaussianReport subgaussian_logmgf_check(const std::vector<double>& weights,
                                           double rho, double r_max, int grid_points) {
  double s2 = 0.0;
  for (double w : weights) s2 += w * w;
  s2 *= 0.25;
  SubGaussianReport rep{-std::numeric_limits<double>::infinity(), s2, 0.0};
  for (int i = 0; i < grid_points; ++i) {
    double r = -r_max + 2.0 * r_max * i / (grid_points - 1);
    double lm = 0.0;
    for (double w : weights) {
      // log( rho e^{r w (1-rho)} + (1-rho) e^{-r w rho} ), stabilized
      double a1 = r * w * (1.0 - rho), a2 = -r * w * rho;
      double mx = std::max(a1, a2);
      lm += mx + std::log(rho * std::exp(a1 - mx) + (1.0 - rho) * std::exp(a2 - mx));
    }
    double viol = lm - 0.5 * r * r * s2;
    if (viol > rep.max_violation) {
      rep.max_violation = viol;
      rep.argmax_r = r;
    }
  }
  return rep;
}

}  // namespace exg
