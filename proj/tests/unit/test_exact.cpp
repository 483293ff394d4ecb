#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "exg/exact.hpp"

using namespace exg;

TEST_CASE("generator rows sum to zero and sizes guard") {
  ModelParams p = ModelParams::create(6, 1, 1.2, 0.8, 0.15);
  GeneratorMatrix gen = build_generator(p);
  auto L = gen.combined();
  double worst = 0;
  for (int64_t i = 0; i < gen.dim; ++i) {
    double s = 0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L, i); it; ++it)
      s += it.value();
    worst = std::max(worst, std::abs(s));
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(build_generator(ModelParams::create(15, 1, 1, 1, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_generator(ModelParams::create(4, 2, 1, 1, 0)),
                  std::invalid_argument);
}

TEST_CASE("nu_1/2 is stationary at lambda=0") {
  GeneratorMatrix gen = build_generator(ModelParams::create(3, 1, 1, 1, 0));
  Eigen::VectorXd nu = product_measure(3, 0.5);
  Eigen::VectorXd res = gen.combined().transpose() * nu;
  CHECK(res.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exclusion detailed balance for every product measure") {
  GeneratorMatrix gen = build_generator(ModelParams::create(3, 1, 1, 1, 0.1));
  for (double rho : {0.3, 0.62}) {
    Eigen::VectorXd nu = product_measure(3, rho);
    double worst = 0;
    for (int64_t i = 0; i < gen.dim; ++i)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(gen.exclusion, i);
           it; ++it) {
        if (it.col() == i) continue;
        worst = std::max(worst, std::abs(nu[i] * it.value() -
                                         nu[it.col()] * gen.exclusion.coeff(it.col(), i)));
      }
    CHECK(worst <= 1e-14);
  }
}

TEST_CASE("spectrum has a simple zero with positive stationary vector") {
  GeneratorMatrix gen = build_generator(ModelParams::create(4, 1, 1, 1, 0.1));
  Eigen::MatrixXd L = Eigen::MatrixXd(gen.combined());
  Eigen::EigenSolver<Eigen::MatrixXd> es(L.transpose());
  int zero_idx = -1;
  double max_real = -1e9;
  for (int i = 0; i < 16; ++i) {
    double re = es.eigenvalues()[i].real();
    if (re > max_real) {
      max_real = re;
      zero_idx = i;
    }
  }
  CHECK(std::abs(max_real) <= 1e-10);
  Eigen::VectorXd v = es.eigenvectors().col(zero_idx).real();
  if (v.sum() < 0) v = -v;
  CHECK(v.minCoeff() > 0.0);
}

TEST_CASE("evolution identities and the uniformization oracle") {
  ModelParams p = ModelParams::create(8, 1, 1, 1, 0.1);
  GeneratorMatrix gen = build_generator(p);
  auto L = gen.combined();
  Eigen::VectorXd nu = product_measure(8, p.rho_star);

  // t = 0 is the identity
  Eigen::VectorXd same = evolve_distribution(L, nu, 0.0);
  CHECK((same - nu).cwiseAbs().maxCoeff() == 0.0);

  // lambda = 0: stationarity to the evolution tolerance
  GeneratorMatrix g0 = build_generator(ModelParams::create(8, 1, 1, 1, 0));
  Eigen::VectorXd half = product_measure(8, 0.5);
  Eigen::VectorXd ev0 = evolve_distribution(g0.combined(), half, 0.7);
  CHECK((ev0 - half).cwiseAbs().maxCoeff() <= 1e-10);

  // primary scaled-Taylor action against the uniformized series
  Eigen::VectorXd a = evolve_distribution(L, nu, 0.5);
  Eigen::VectorXd b = evolve_uniformization(L, nu, 0.5);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::abs(a.sum() - 1.0) <= 1e-12);
  CHECK(a.minCoeff() >= 0.0);

  // dense Pade exponential cross-check on a tiny system
  GeneratorMatrix tiny = build_generator(ModelParams::create(5, 1, 1, 1, 0.2));
  Eigen::MatrixXd Ld = Eigen::MatrixXd(tiny.combined());
  Eigen::VectorXd mu0 = product_measure(5, 0.4);
  Eigen::MatrixXd E = (0.3 * Ld).exp();
  Eigen::VectorXd dense = E.transpose() * mu0;
  Eigen::VectorXd ours = evolve_distribution(tiny.combined(), mu0, 0.3);
  CHECK((dense - ours).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("adjoint identity") {
  // lambda = 0: L* 1 vanishes identically
  AdjointOneResult z = adjoint_one(build_generator(ModelParams::create(4, 1, 1, 1, 0)));
  CHECK(z.lstar_one.cwiseAbs().maxCoeff() <= 1e-12);

  // n=3, lambda=0.1: pointwise agreement, includes eta = (1,1,0) = state 3
  AdjointOneResult r = adjoint_one(build_generator(ModelParams::create(3, 1, 1, 1, 0.1)));
  CHECK(r.max_abs_diff <= 1e-12);
  CHECK(std::abs(r.lstar_one[3] - r.pair_sum[3]) <= 1e-12);

  // n=4, lambda=-0.2: all 16 configurations
  AdjointOneResult r2 = adjoint_one(build_generator(ModelParams::create(4, 1, 1, 1, -0.2)));
  CHECK(r2.max_abs_diff <= 1e-12);
}

TEST_CASE("relative entropy") {
  Eigen::VectorXd nu = product_measure(4, 0.5);
  CHECK(relative_entropy(nu, nu) == doctest::Approx(0.0).epsilon(1e-14));
  Eigen::VectorXd point = Eigen::VectorXd::Zero(16);
  point[5] = 1.0;
  CHECK(relative_entropy(point, nu) == doctest::Approx(4 * std::log(2)).epsilon(1e-13));
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(16);
  bad[0] = 1.0;
  Eigen::VectorXd partial = Eigen::VectorXd::Zero(16);
  partial[1] = 1.0;
  CHECK_THROWS_AS(relative_entropy(bad, partial), std::domain_error);
}

TEST_CASE("dirichlet forms") {
  GeneratorMatrix gen = build_generator(ModelParams::create(3, 1, 1, 1, 0));
  Eigen::VectorXd cst = Eigen::VectorXd::Constant(8, 2.7);
  DirichletForms dz = dirichlet_forms(gen, cst);
  CHECK(dz.exclusion == 0.0);
  CHECK(dz.glauber == 0.0);

  // f = eta_0 at rho = 1/2, c == 1: the flip sum gives exactly 1/2
  Eigen::VectorXd f(8);
  for (int s = 0; s < 8; ++s) f[s] = s & 1;
  DirichletForms d1 = dirichlet_forms(gen, f);
  CHECK(d1.glauber == doctest::Approx(0.5).epsilon(1e-14));

  // carre du champ identity against the generator route, random f
  GeneratorMatrix g2 = build_generator(ModelParams::create(5, 1, 1.1, 0.9, 0.25));
  Philox rng(50, 0);
  Eigen::VectorXd fr(g2.dim);
  for (int64_t i = 0; i < g2.dim; ++i) fr[i] = rng.normal();
  Eigen::VectorXd nu = product_measure(5, g2.params.rho_star);
  DirichletForms df = dirichlet_forms(g2, fr);
  Eigen::VectorXd f2 = fr.cwiseProduct(fr);
  double ex_id = nu.dot(Eigen::VectorXd(0.5 * (g2.exclusion * f2) -
                                        fr.cwiseProduct(g2.exclusion * fr)));
  double gl_id =
      nu.dot(Eigen::VectorXd(0.5 * (g2.glauber * f2) - fr.cwiseProduct(g2.glauber * fr)));
  CHECK(std::abs(df.exclusion - ex_id) <= 1e-12);
  CHECK(std::abs(df.glauber - gl_id) <= 1e-12);
}

TEST_CASE("log-sobolev ratio estimate") {
  // single independent flip site at a=b=1 has the analytic constant 1
  // (tensorizes over sites); sampled ratios approach it from below
  double k3 = lsi_constant(build_generator(ModelParams::create(3, 1, 1, 1, 0)), 8000, 7);
  CHECK(k3 >= 0.90);
  CHECK(k3 <= 1.02);
  double k5 = lsi_constant(build_generator(ModelParams::create(5, 1, 1, 1, 0)), 8000, 7);
  CHECK(std::abs(k5 - k3) / k3 <= 0.10);
}

TEST_CASE("mean curve") {
  std::vector<double> grid{0.1, 0.2, 0.4, 0.7, 1.0};
  // lambda = 0: m stays at rho* and the residual vanishes
  MeanCurve flat = mean_curve(build_generator(ModelParams::create(6, 1, 1, 1, 0)), grid);
  CHECK(flat.sup_deviation <= 1e-10);
  for (double r : flat.residual) CHECK(std::abs(r) <= 1e-9);
  CHECK(flat.site_dependence <= 1e-12);

  // lambda = 0.1: n * sup_t |m - rho*| stays of one size across n
  double prev = -1.0;
  for (int n : {4, 6, 8}) {
    MeanCurve mc = mean_curve(build_generator(ModelParams::create(n, 1, 1, 1, 0.1)), grid);
    CHECK(mc.site_dependence <= 1e-12);
    double scaled = n * mc.sup_deviation;
    if (prev > 0) CHECK(scaled <= prev * 1.3);
    prev = scaled;
  }
}

TEST_CASE("two point correlation bound") {
  std::vector<double> grid{0.25, 0.5, 1.0};
  CorrelationBound c0 =
      two_point_correlation(build_generator(ModelParams::create(5, 1, 1, 1, 0)), grid);
  CHECK(c0.sup_abs_cov <= 1e-10);
  CorrelationBound c1 =
      two_point_correlation(build_generator(ModelParams::create(5, 1, 1, 1, 0.1)), grid);
  CHECK(c1.sup_abs_cov > 0.0);
  CHECK(c1.normalized == doctest::Approx(5 * c1.sup_abs_cov));
  // t = 0 alone: product measure has no correlations
  CorrelationBound ct0 =
      two_point_correlation(build_generator(ModelParams::create(5, 1, 1, 1, 0.1)), {0.0});
  CHECK(ct0.sup_abs_cov <= 1e-14);
}

TEST_CASE("replacement inequality margins") {
  ModelParams p = ModelParams::create(8, 1, 1, 1, 0.1);
  GeneratorMatrix gen = build_generator(p);
  Flow flow = build_flow(3, 1);
  ReplacementCheck rc = replacement_inequality_check(gen, flow, 3, 1.0, 200, 99);
  CHECK(rc.worst_margin >= -1e-10);
  // f == 1: the LHS integrates to zero under the product measure
  CHECK(std::abs(rc.lhs_at_one) <= 1e-12);
  // ell = 1: V^1 = V exactly, margins are pure RHS >= 0
  Flow f1 = build_flow(1, 1);
  ReplacementCheck r1 = replacement_inequality_check(gen, f1, 1, 0.5, 50, 99);
  CHECK(r1.worst_margin >= -1e-12);
}
