#include <doctest.h>

#include <cmath>
#include <limits>

#include "exg/rates.hpp"

using namespace exg;

namespace {
const ModelParams kPreset = ModelParams::create(64, 1, 1.0, 1.0, 0.0);
}

TEST_CASE("rate_I basics") {
  AlphaOracle alpha(kPreset);
  RateProblem z = make_rate_problem(alpha, {0.5, 1.0}, {0.0, 0.0});
  CHECK(rate_I(z) == 0.0);

  // k = 1 is the explicit one-dimensional quadratic
  RateProblem one = make_rate_problem(alpha, {0.7}, {1.3});
  CHECK(rate_I(one) ==
        doctest::Approx(1.3 * 1.3 / (2 * alpha(0.7, 0.7))).epsilon(1e-12));

  CHECK_THROWS_AS(make_rate_problem(alpha, {1.0, 0.5}, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_rate_problem(alpha, {0.5, 0.5}, {1, 1}), std::invalid_argument);
}

TEST_CASE("rate_I against the explicit 2x2 inverse") {
  AlphaOracle alpha(kPreset);
  std::vector<double> times{0.5, 1.0};
  std::vector<double> g{0.8, -0.4};
  RateProblem pr = make_rate_problem(alpha, times, g);
  // independent route: closed-form inverse of the 2x2 covariance
  double a = alpha(0.5, 0.5), b = alpha(0.5, 1.0), c = alpha(1.0, 1.0);
  double det = a * c - b * b;
  double quad = (c * g[0] * g[0] - 2 * b * g[0] * g[1] + a * g[1] * g[1]) / det;
  CHECK(rate_I(pr) == doctest::Approx(0.5 * quad).epsilon(1e-10));
}

TEST_CASE("near-singular covariance and range handling") {
  AlphaOracle alpha(kPreset);
  std::vector<double> times{0.5, 0.5 + 1e-9};
  RateProblem in_range = make_rate_problem(alpha, times, {1.0, 1.0});
  CHECK(std::isfinite(rate_I(in_range)));
  RateProblem out_range = make_rate_problem(alpha, times, {1.0, -1.0});
  CHECK(rate_I(out_range) == std::numeric_limits<double>::infinity());
}

TEST_CASE("rate_Q0 values") {
  CHECK(rate_Q0({}, 0.25) == 0.0);
  CHECK(rate_Q0({1.0}, 0.25) == doctest::Approx(2.0).epsilon(1e-14));
  // truncated delta_0: coefficients (1, sqrt2 x K) give (1 + 2K)/(2 chi)
  for (int K : {4, 16}) {
    std::vector<double> coeffs{1.0};
    for (int k = 0; k < K; ++k) coeffs.push_back(std::sqrt(2.0));
    CHECK(rate_Q0(coeffs, 0.25) ==
          doctest::Approx((1.0 + 2.0 * K) / 0.5).epsilon(1e-13));
  }
}

TEST_CASE("rate_Qdyn closed cases") {
  GalerkinPath zero;
  zero.T = 1.0;
  zero.K_s = 3;
  zero.M = 8;
  zero.mu.assign(4, std::vector<double>(9, 0.0));
  CHECK(rate_Qdyn(zero, kPreset) == 0.0);

  // mu_1(t) = t is piecewise linear, so the discretization is exact:
  // integral of (1 + m t)^2 / (2 sigma^2) = (1 + m + m^2/3) / (2 sigma^2)
  GalerkinPath lin;
  lin.T = 1.0;
  lin.K_s = 1;
  lin.M = 8;
  lin.mu.assign(2, std::vector<double>(9, 0.0));
  for (int j = 0; j <= 8; ++j) lin.mu[1][j] = j / 8.0;
  OUMode m1 = ou_mode(kPreset, 1);
  double m = -m1.drift;
  double expect = (1.0 + m + m * m / 3.0) / (2.0 * m1.noise_var);
  CHECK(rate_Qdyn(lin, kPreset) == doctest::Approx(expect).epsilon(1e-12));

  // the deterministic flow mu' = drift mu has vanishing action; the
  // piecewise-linear interpolant reaches it as the grid refines
  auto action_of_flow = [&](int M) {
    GalerkinPath pth;
    pth.T = 1.0;
    pth.K_s = 0;
    pth.M = M;
    pth.mu.assign(1, std::vector<double>(M + 1));
    OUMode m0 = ou_mode(kPreset, 0);
    for (int j = 0; j <= M; ++j) pth.mu[0][j] = std::exp(m0.drift * j / M);
    return rate_Qdyn(pth, kPreset);
  };
  double a256 = action_of_flow(256);
  double a1024 = action_of_flow(1024);
  CHECK(a1024 < a256);
  CHECK(a1024 <= 1e-6);
  CHECK(action_of_flow(40000) <= 1e-9);
}

TEST_CASE("contraction check consistency") {
  // gamma = 0: both values vanish
  ContractionResult z = contraction_check(kPreset, {1.0}, {0.0}, 0.05, 16, 64);
  CHECK(z.variational == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(z.quadratic == doctest::Approx(0.0).epsilon(1e-14));

  // times off the grid are rejected
  CHECK_THROWS_AS(contraction_check(kPreset, {0.3333}, {1.0}, 0.05, 8, 64),
                  std::invalid_argument);

  // exact mode: the Galerkin gap shrinks monotonically in K_s
  double prev = 1e9;
  for (int Ks : {16, 32, 64}) {
    ContractionResult r = contraction_check(kPreset, {1.0}, {1.0}, std::nullopt, Ks, 256);
    CHECK(r.gap >= -1e-12);
    CHECK(r.gap < prev);
    prev = r.gap;
  }

  // two constraints, both modes of evaluation agree reasonably at high cutoff
  ContractionResult r2 =
      contraction_check(kPreset, {0.5, 1.0}, {0.5, 1.0}, 0.05, 64, 256);
  CHECK(std::abs(r2.variational - r2.quadratic) <= 2e-3 * r2.quadratic);
}
