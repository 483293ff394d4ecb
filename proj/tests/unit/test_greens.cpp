#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "exg/greens.hpp"
#include "exg/io.hpp"

using namespace exg;

TEST_CASE("green function n=3 d=1 closed form") {
  // direct solve of (1 - 9 Delta) g = delta_0 on three sites gives
  // g = (5/14, 9/28, 9/28)
  GreenTable g = green_function(3, 1);
  CHECK(g.values[0] == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  CHECK(g.values[1] == doctest::Approx(9.0 / 28.0).epsilon(1e-12));
  CHECK(g.values[2] == doctest::Approx(9.0 / 28.0).epsilon(1e-12));
}

TEST_CASE("green table invariants") {
  for (auto [n, d] : {std::pair{64, 1}, {24, 2}, {8, 3}}) {
    GreenTable g = green_function(n, d);
    CHECK(g.residual_inf <= 1e-10);
    CHECK(std::abs(g.sum - 1.0) <= 1e-10);
    double mn = 1e9;
    for (double v : g.values) mn = std::min(mn, v);
    CHECK(mn > 0.0);
  }
}

TEST_CASE("green symmetry under reflection and coordinate permutation") {
  GreenTable g = green_function(8, 2);
  Torus t(8, 2);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      double a = g.values[t.index({x, y, 0})];
      CHECK(a == doctest::Approx(g.values[t.index({(8 - x) % 8, (8 - y) % 8, 0})])
                     .epsilon(1e-12));
      CHECK(a == doctest::Approx(g.values[t.index({y, x, 0})]).epsilon(1e-12));
    }
}

TEST_CASE("heat kernel basics and the 3-site closed form") {
  auto p0 = heat_kernel(16, 1, 0.0);
  CHECK(p0[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (size_t i = 1; i < p0.size(); ++i) CHECK(std::abs(p0[i]) <= 1e-12);

  auto p = heat_kernel(12, 2, 0.03);
  double s = 0;
  for (double v : p) s += v;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  // n=3, d=1: dispersion is flat at lambda=3, so
  // p(t,0) = 1/3 + 2/3 e^{-27 t}, p(t,1) = 1/3 - 1/3 e^{-27 t}
  auto p3 = heat_kernel(3, 1, 0.05);
  CHECK(p3[0] == doctest::Approx(1.0 / 3 + 2.0 / 3 * std::exp(-27 * 0.05)).epsilon(1e-12));
  CHECK(p3[1] == doctest::Approx(1.0 / 3 - 1.0 / 3 * std::exp(-27 * 0.05)).epsilon(1e-12));
}

TEST_CASE("d=2 scaled limit quantities") {
  // frozen spectral values; both quantities approach 1/(2 pi) from above
  ModelParams p128 = ModelParams::create(128, 2, 1, 1, 0);
  RwLimits r128 = rw_limit_quantities(green_function(128, 2), p128);
  CHECK(r128.grad_energy_scaled == doctest::Approx(0.167654).epsilon(2e-5));
  CHECK(r128.gn0_raw_scaled == doctest::Approx(0.374521).epsilon(2e-5));
  CHECK(r128.gn0_scaled ==
        doctest::Approx(0.374521 - 1.0 / std::log(128.0)).epsilon(1e-4));

  // the raw point value carries the conserved-mode offset 1/log n
  CHECK(r128.gn0_raw_scaled - r128.gn0_scaled ==
        doctest::Approx(1.0 / std::log(128.0)).epsilon(1e-12));
}

TEST_CASE("d=3 point value matches the infinite-lattice return integral") {
  ModelParams p = ModelParams::create(64, 3, 1, 1, 0);
  RwLimits r = rw_limit_quantities(green_function(64, 3), p);
  double watson = z3_return_time_integral();
  CHECK(std::abs(r.gn0_scaled - watson) / watson <= 0.15);
  CHECK(std::abs(r.grad_energy_scaled - watson) / watson <= 0.15);
}

TEST_CASE("z3 return integral against the closed-form Watson constant") {
  // (1/2) * sqrt(6)/(32 pi^3) * Gamma(1/24) Gamma(5/24) Gamma(7/24) Gamma(11/24)
  CHECK(z3_return_time_integral() == doctest::Approx(0.2527310098).epsilon(1e-7));
}

TEST_CASE("scaled bessel i0") {
  CHECK(scaled_bessel_i0(1.0) == doctest::Approx(0.4657596075936404).epsilon(1e-13));
  CHECK(scaled_bessel_i0(8.0) == doctest::Approx(0.14343178185685032).epsilon(1e-13));
  CHECK(scaled_bessel_i0(30.0) == doctest::Approx(0.07314594648223727).epsilon(1e-12));
  CHECK(scaled_bessel_i0(100.0) == doctest::Approx(0.03994437929909668).epsilon(1e-12));
}

TEST_CASE("d=1 gradient trend over n") {
  // sqrt(n) * max |grad g| shrinks with n (no blow-up of the d=1 scaling)
  double prev = 1e9;
  for (int n : {256, 512, 1024}) {
    GreenTable g = green_function(n, 1);
    double mx = 0;
    for (int x = 0; x < n; ++x)
      mx = std::max(mx, std::abs(g.values[(x + 1) % n] - g.values[x]));
    double scaled = std::sqrt(static_cast<double>(n)) * mx;
    CHECK(scaled < prev);
    prev = scaled;
  }
}

TEST_CASE("green table binary round trip") {
  GreenTable g = green_function(16, 2);
  std::string path = "/tmp/exg_test_green.exgt";
  save_green_table(g, path);
  GreenTable h = load_green_table(path);
  CHECK(h.n == 16);
  CHECK(h.d == 2);
  double worst = 0;
  for (size_t i = 0; i < g.values.size(); ++i)
    worst = std::max(worst, std::abs(g.values[i] - h.values[i]));
  CHECK(worst == 0.0);
  CHECK(h.bond_energy == doctest::Approx(g.bond_energy).epsilon(1e-15));
  std::remove(path.c_str());
}

TEST_CASE("lattice size guard") {
  CHECK_THROWS_AS(green_function(8192, 2), std::invalid_argument);
}
