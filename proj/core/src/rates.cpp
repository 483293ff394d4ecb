#include "exg/rates.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace exg {

RateProblem make_rate_problem(const AlphaOracle& oracle, std::vector<double> times,
                              std::vector<double> gamma) {
  if (times.size() != gamma.size())
    throw std::invalid_argument("rate problem: times and gamma sizes differ");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("inconsistent-input: times must be sorted and distinct");
  RateProblem p;
  p.sigma = covariance_matrix(oracle, times);
  p.times = std::move(times);
  p.gamma = std::move(gamma);
  return p;
}

double rate_I(const RateProblem& problem) {
  const int k = static_cast<int>(problem.times.size());
  if (k == 0) return 0.0;
  Eigen::Map<const Eigen::MatrixXd> S(problem.sigma.data(), k, k);
  Eigen::Map<const Eigen::VectorXd> g(problem.gamma.data(), k);
  if (g.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const double floor = 1e-12 * S.trace();
  Eigen::VectorXd c = es.eigenvectors().transpose() * g;
  double val = 0.0;
  for (int i = 0; i < k; ++i) {
    double lam = es.eigenvalues()[i];
    if (lam <= floor) {
      // target with a component outside the (numerical) range of Sigma
      if (std::abs(c[i]) > 1e-9 * g.norm())
        return std::numeric_limits<double>::infinity();
      continue;
    }
    val += c[i] * c[i] / lam;
  }
  return 0.5 * val;
}

double rate_Q0(const std::vector<double>& mu0_coeffs, double chi) {
  double s2 = 0.0;
  for (double c : mu0_coeffs) s2 += c * c;
  return s2 / (2.0 * chi);
}

namespace {

// exact integral over one interval of ((v-u)/h + m*(u+(v-u)s))^2 * h ds,
// as the 2x2 quadratic form [uu, uv; uv, vv] on (u, v)
struct LocalForm {
  double uu, uv, vv;
};
LocalForm interval_form(double h, double m) {
  LocalForm f;
  f.uu = 1.0 / h - m + m * m * h / 3.0;
  f.vv = 1.0 / h + m + m * m * h / 3.0;
  f.uv = -1.0 / h + m * m * h / 6.0;
  return f;
}

// symmetric tridiagonal solve (Thomas), diag d[0..n-1], off e[0..n-2]
void tridiag_solve(std::vector<double> d, std::vector<double> e,
                   std::vector<double>& x) {
  const size_t n = d.size();
  for (size_t i = 1; i < n; ++i) {
    double w = e[i - 1] / d[i - 1];
    d[i] -= w * e[i - 1];
    x[i] -= w * x[i - 1];
  }
  x[n - 1] /= d[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e[i] * x[i + 1]) / d[i];
}

}  // namespace

double rate_Qdyn(const GalerkinPath& path, const ModelParams& params) {
  if (path.M < 1 || path.K_s < 0) throw std::invalid_argument("nonconforming-grid");
  const double h = path.T / path.M;
  double total = 0.0;
  for (int k = 0; k <= path.K_s; ++k) {
    if (static_cast<int>(path.mu[k].size()) != path.M + 1)
      throw std::invalid_argument("nonconforming-grid: mode has wrong node count");
    OUMode mode = ou_mode(params, k);
    const double m = -mode.drift;
    LocalForm f = interval_form(h, m);
    double acc = 0.0;
    for (int j = 0; j < path.M; ++j) {
      double u = path.mu[k][j], v = path.mu[k][j + 1];
      acc += f.uu * u * u + 2.0 * f.uv * u * v + f.vv * v * v;
    }
    total += acc / (2.0 * mode.noise_var);
  }
  return total;
}

ContractionResult contraction_check(const ModelParams& params,
                                    const std::vector<double>& t_points,
                                    const std::vector<double>& gamma,
                                    std::optional<double> epsilon, int K_s, int M,
                                    double T) {
  const size_t kc = t_points.size();
  if (kc == 0 || kc > 3 || gamma.size() != kc)
    throw std::invalid_argument("contraction: 1..3 constraint times required");
  const double h = T / M;

  // constraint node indices (times must sit on the grid)
  std::vector<int> t_idx(kc);
  for (size_t i = 0; i < kc; ++i) {
    double r = t_points[i] / h;
    int j = static_cast<int>(std::lround(r));
    if (std::abs(r - j) > 1e-9 || j < 1 || j > M)
      throw std::invalid_argument("nonconforming-grid: t_i must lie on the time grid");
    t_idx[i] = j;
  }

  // trapezoid weights a_i[j] for int_0^{t_i} mu dt
  std::vector<std::vector<double>> a(kc, std::vector<double>(M + 1, 0.0));
  for (size_t i = 0; i < kc; ++i) {
    for (int j = 0; j < t_idx[i]; ++j) {
      a[i][j] += 0.5 * h;
      a[i][j + 1] += 0.5 * h;
    }
  }

  // mode weights chat_k of the constraint functional
  std::vector<double> chat(K_s + 1);
  chat[0] = 1.0;
  for (int k = 1; k <= K_s; ++k)
    chat[k] = epsilon ? std::sqrt(2.0) * Mollifier::cosine_transform(k * *epsilon)
                      : std::sqrt(2.0);

  // Schur complement S_{il} = sum_k chat_k^2 a_i^T Q_k^{-1} a_l
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(kc, kc);
  for (int k = 0; k <= K_s; ++k) {
    OUMode mode = ou_mode(params, k);
    const double m = -mode.drift;
    LocalForm f = interval_form(h, m);
    // assemble tridiagonal Q_k (divided by sigma^2, plus the Q_0 block)
    std::vector<double> diag(M + 1, 0.0), off(M, 0.0);
    for (int j = 0; j < M; ++j) {
      diag[j] += f.uu / mode.noise_var;
      diag[j + 1] += f.vv / mode.noise_var;
      off[j] += f.uv / mode.noise_var;
    }
    diag[0] += 1.0 / params.chi_star;
    std::vector<std::vector<double>> sol(kc);
    for (size_t i = 0; i < kc; ++i) {
      sol[i] = a[i];
      tridiag_solve(diag, off, sol[i]);
    }
    const double w2 = chat[k] * chat[k];
    for (size_t i = 0; i < kc; ++i)
      for (size_t l = i; l < kc; ++l) {
        double dot = 0.0;
        for (int j = 0; j <= M; ++j) dot += a[i][j] * sol[l][j];
        S(i, l) += w2 * dot;
        S(l, i) = S(i, l);
      }
  }

  Eigen::Map<const Eigen::VectorXd> g(gamma.data(), kc);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("optimization-infeasible: singular constraint Gramian");
  double variational = 0.5 * g.dot(ldlt.solve(g));

  // quadratic reference from the closed-form covariance at full truncation
  AlphaOracle oracle(params, epsilon, epsilon ? 4000 : 10000);
  std::vector<double> sig = covariance_matrix(oracle, t_points, 1e-4);
  Eigen::Map<const Eigen::MatrixXd> Sig(sig.data(), kc, kc);
  Eigen::LDLT<Eigen::MatrixXd> l2(Sig);
  double quadratic = 0.5 * g.dot(l2.solve(g));

  return {variational, quadratic, variational - quadratic};
}

}  // namespace exg
