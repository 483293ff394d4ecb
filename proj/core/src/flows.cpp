#include "exg/flows.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "exg/model.hpp"

namespace exg {

namespace {

std::mutex fftw_mutex;

// solve (-Delta_Neumann) u = f on the d-dim box of side m via DCT-II/III;
// f must have zero sum; the k=0 mode of u is set to zero
std::vector<double> neumann_poisson(const std::vector<double>& f, int m, int d) {
  const int64_t N = f.size();
  std::vector<double> work(f);
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    int dims[3] = {m, m, m};
    fftw_r2r_kind kf[3] = {FFTW_REDFT10, FFTW_REDFT10, FFTW_REDFT10};
    fftw_r2r_kind kb[3] = {FFTW_REDFT01, FFTW_REDFT01, FFTW_REDFT01};
    fwd = fftw_plan_r2r(d, dims, work.data(), work.data(), kf, FFTW_ESTIMATE);
    bwd = fftw_plan_r2r(d, dims, work.data(), work.data(), kb, FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  // eigenvalues of -Delta_N in the DCT-II basis
  std::vector<double> l1(m);
  for (int k = 0; k < m; ++k) l1[k] = 2.0 * (1.0 - std::cos(M_PI * k / m));
  int64_t stride2 = (d >= 3) ? m : 1;
  int64_t stride1 = (d >= 2) ? (d >= 3 ? m * (int64_t)m : m) : 1;
  for (int64_t i = 0; i < N; ++i) {
    int64_t r = i;
    double lam = 0.0;
    if (d == 1) {
      lam = l1[r];
    } else if (d == 2) {
      lam = l1[r / m] + l1[r % m];
    } else {
      lam = l1[r / (m * (int64_t)m)] + l1[(r / m) % m] + l1[r % m];
    }
    (void)stride1;
    (void)stride2;
    work[i] = (lam > 1e-13) ? work[i] / lam : 0.0;
  }
  fftw_execute(bwd);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  // REDFT10 followed by REDFT01 scales by 2m per transformed dimension
  double scale = 1.0;
  for (int i = 0; i < d; ++i) scale *= 2.0 * m;
  for (auto& v : work) v /= scale;
  return work;
}

int64_t box_index(const std::array<int, 3>& x, int m, int d) {
  int64_t idx = 0;
  for (int i = 0; i < d; ++i) idx = idx * m + x[i];
  return idx;
}

}  // namespace

double Flow::phi_box(const std::array<int, 3>& x, int ax) const {
  // edges along ax indexed with the ax-coordinate range reduced to m-1
  int64_t idx = 0;
  for (int i = 0; i < d; ++i) {
    int extent = (i == ax) ? m - 1 : m;
    idx = idx * extent + x[i];
  }
  return edge[ax][idx];
}

double Flow::phi_torus(const Torus& t, int64_t u, int64_t v) const {
  auto cu = t.coords(u), cv = t.coords(v);
  for (int i = 0; i < d; ++i)
    if (cu[i] >= m || cv[i] >= m) return 0.0;
  // find the axis along which they differ by one inside the box (no wrap)
  int ax = -1, dir = 0;
  for (int i = 0; i < d; ++i) {
    int diff = cv[i] - cu[i];
    if (diff == 0) continue;
    if ((diff == 1 || diff == -1) && ax == -1) {
      ax = i;
      dir = diff;
    } else {
      return 0.0;  // not box-adjacent
    }
  }
  if (ax == -1) return 0.0;
  if (dir == 1) return phi_box(cu, ax);
  return -phi_box(cv, ax);
}

Flow build_flow(int ell, int d) {
  if (ell < 1) throw std::invalid_argument("flow: ell >= 1 required");
  if (d < 1 || d > 3) throw std::invalid_argument("flow: d in {1,2,3}");
  Flow fl;
  fl.ell = ell;
  fl.d = d;
  fl.m = 2 * ell - 1;
  const int m = fl.m;
  int64_t N = 1;
  for (int i = 0; i < d; ++i) N *= m;

  for (int ax = 0; ax < d; ++ax) {
    int64_t edges = N / m * (m - 1);
    fl.edge[ax].assign(ax < d ? edges : 0, 0.0);
  }
  if (ell == 1) return fl;  // q_1 = delta_0, zero flow

  // f = delta_0 - q_ell on the box
  BlockKernel kern = BlockKernel::create(ell, d, 4 * ell + 1);
  std::vector<double> f(N, 0.0);
  std::array<int, 3> x{0, 0, 0};
  for (int64_t i = 0; i < N; ++i) {
    int64_t r = i;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = static_cast<int>(r % m);
      r /= m;
    }
    f[i] = -kern.q(x);
  }
  f[0] += 1.0;

  std::vector<double> u = neumann_poisson(f, m, d);

  double bond_energy = 0.0;
  for (int ax = 0; ax < d; ++ax) {
    int64_t e = 0;
    std::array<int, 3> y{0, 0, 0};
    // iterate all box sites with y[ax] < m-1 in the same order as phi_box
    std::array<int, 3> extents{1, 1, 1};
    for (int i = 0; i < d; ++i) extents[i] = (i == ax) ? m - 1 : m;
    int64_t tot = 1;
    for (int i = 0; i < d; ++i) tot *= extents[i];
    for (int64_t i = 0; i < tot; ++i) {
      int64_t r = i;
      for (int j = d - 1; j >= 0; --j) {
        y[j] = static_cast<int>(r % extents[j]);
        r /= extents[j];
      }
      std::array<int, 3> yp = y;
      yp[ax] += 1;
      double val = u[box_index(y, m, d)] - u[box_index(yp, m, d)];
      fl.edge[ax][e++] = val;
      bond_energy += val * val;
    }
  }
  fl.energy_bond = bond_energy;
  fl.energy = 2.0 * bond_energy;

  // divergence check: sum over box neighbors of phi(x, y) = f(x)
  double resid = 0.0;
  for (int64_t i = 0; i < N; ++i) {
    int64_t r = i;
    for (int j = d - 1; j >= 0; --j) {
      x[j] = static_cast<int>(r % m);
      r /= m;
    }
    double div = 0.0;
    for (int ax = 0; ax < d; ++ax) {
      if (x[ax] + 1 < m) div += fl.phi_box(x, ax);
      if (x[ax] - 1 >= 0) {
        std::array<int, 3> xm = x;
        xm[ax] -= 1;
        div -= fl.phi_box(xm, ax);
      }
    }
    resid = std::max(resid, std::abs(div - f[i]));
  }
  fl.divergence_residual = resid;
  return fl;
}

Flow build_flow(int ell, int d, int box_n) {
  if (box_n < 2 * ell - 1)
    throw std::invalid_argument("infeasible: box cannot contain Lambda_{2l-1}");
  return build_flow(ell, d);
}

std::vector<double> cumulative_flow_1d(int ell) {
  BlockKernel kern = BlockKernel::create(ell, 1, 4 * ell + 1);
  int m = 2 * ell - 1;
  std::vector<double> phi(m - 1, 0.0);
  double acc = 0.0;
  for (int j = 0; j + 1 < m; ++j) {
    double fj = (j == 0 ? 1.0 : 0.0) - kern.q1[j];
    acc += fj;
    phi[j] = acc;
  }
  return phi;
}

}  // namespace exg
