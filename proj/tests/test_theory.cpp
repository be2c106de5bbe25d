#include "sigmalab/norms.hpp"
#include "sigmalab/solver.hpp"
#include "sigmalab/theory.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace sigmalab;

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(1, 1.0, 1.0) == 3.0);
  CHECK(critical_exponent(2, 1.0, 1.0) == 2.0);
  CHECK(critical_exponent(4, 1.5, 2.0) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("admissibility at the reference point") {
  const auto r = admissibility(ModelParams{1, 1.0, 0.5, 4.0, 1.0});
  CHECK(r.p_crit == 3.0);
  CHECK(r.lower_14.bound == doctest::Approx(3.0));
  CHECK(r.lower_14.holds);
  CHECK(r.branch == "low");
  CHECK_FALSE(r.upper_14.applicable);
  CHECK(r.cond_15.bound == doctest::Approx(3.5));
  CHECK(r.cond_15.holds);
  CHECK(r.overall);
  CHECK(r.riesz_q_sm.value == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(r.riesz_q_sm.in_range);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("admissibility in the high-dimension branch") {
  const auto r = admissibility(ModelParams{3, 1.0, 1.0, 4.0, 1.0});
  CHECK(r.dim_bound_14 == doctest::Approx((4.0 + std::sqrt(32.0)) / 2.0).epsilon(1e-14));
  CHECK(r.dim_bound_14 == doctest::Approx(4.8284).epsilon(1e-4));
  CHECK(r.branch == "high");
  CHECK(r.upper_14.applicable);
  CHECK(r.upper_14.bound == doctest::Approx(5.0));
  CHECK(admissibility(ModelParams{3, 1.0, 1.0, 5.0, 1.0}).upper_14.holds);
  CHECK_FALSE(admissibility(ModelParams{3, 1.0, 1.0, 5.5, 1.0}).upper_14.holds);
}

TEST_CASE("boundary cases follow the strict and non-strict inequalities") {
  // p exactly at the (1.5)-type bound fails the strict test; exactly at the lower bound passes.
  const auto at15 = admissibility(ModelParams{1, 1.0, 0.5, 3.5, 1.0});
  CHECK_FALSE(at15.cond_15.holds);
  const auto atlow = admissibility(ModelParams{2, 1.0, 0.5, 2.5, 1.0});
  CHECK(atlow.lower_14.bound == doctest::Approx(2.5));
  CHECK(atlow.lower_14.holds);
}

TEST_CASE("vanishing alpha recovers the critical exponent") {
  const auto r = admissibility(ModelParams{1, 1.0, 1e-9, 4.0, 1.0});
  CHECK(std::abs(r.cond_15.bound - critical_exponent(1, 1.0, 1.0)) <= 1e-8);
  double previous = 1.0;
  for (double alpha : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double gap = admissibility(ModelParams{2, 1.5, alpha, 4.0, 1.3}).cond_15.bound - critical_exponent(2, 1.3, 1.5);
    CHECK(gap > 0.0);
    CHECK(gap < previous);
    CHECK(gap <= 1.0 * alpha);
    previous = gap;
  }
}

TEST_CASE("dimension bound is nondecreasing in alpha and sigma") {
  for (double m : {1.0, 1.25, 1.5, 1.9}) {
    for (double sigma : {1.0, 1.5, 2.0, 3.0}) {
      double prev = 0.0;
      for (double alpha : {0.1, 0.3, 0.5, 0.9}) {
        const double b = admissibility(ModelParams{1, sigma, alpha, 4.0, m}).dim_bound_14;
        CHECK(b >= prev);
        prev = b;
      }
    }
    for (double alpha : {0.2, 0.7}) {
      double prev = 0.0;
      for (double sigma : {1.0, 1.5, 2.0, 3.0}) {
        const double b = admissibility(ModelParams{1, sigma, alpha, 4.0, m}).dim_bound_14;
        CHECK(b >= prev);
        prev = b;
      }
    }
  }
}

TEST_CASE("gn theta") {
  CHECK(gn_theta(4.0, 2, 1.0) == 0.5);
  CHECK(gn_theta(2.0, 3, 1.7) == 0.0);
  CHECK(gn_theta(8.0 / 3.0, 1, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
  double prev = -1e300;
  for (double q = 1.1; q < 40.0; q *= 1.3) {
    const double th = gn_theta(q, 2, 1.5);
    CHECK(th > prev);
    prev = th;
  }
}

TEST_CASE("duhamel decay") {
  CHECK(duhamel_decay(2.0, 0.5) == 0.5);
  CHECK(duhamel_decay(1.5, 1.2) == 1.2);
  CHECK_FALSE(duhamel_decay(0.3, 0.9).has_value());
  CHECK_FALSE(duhamel_decay(1.0, 1.0).has_value());
  for (double a : {0.2, 1.0, 1.5, 3.0}) {
    for (double b : {0.1, 0.9, 2.0}) CHECK(duhamel_decay(a, b) == duhamel_decay(b, a));
  }
}

TEST_CASE("nonlinearity decay exponent") {
  const ModelParams params{1, 1.0, 0.5, 4.0, 1.0};
  CHECK(nonlinearity_decay_exponent(params, 2.0) == doctest::Approx(-1.5));
  CHECK(nonlinearity_decay_exponent(params, 1.0) == doctest::Approx(-1.25));
  CHECK_THROWS_AS(nonlinearity_decay_exponent(params, 1.5), std::invalid_argument);
}

TEST_CASE("integrability threshold coincides with the strict condition") {
  for (int n : {1, 2, 3}) {
    for (double sigma : {1.0, 1.5}) {
      for (double m : {1.0, 1.5}) {
        for (double alpha : {0.25, 0.75}) {
          const double threshold = 1.0 + (2.0 * sigma + alpha) * m / n;
          CHECK(nonlinearity_decay_exponent(ModelParams{n, sigma, alpha, threshold, m}, m) ==
                doctest::Approx(-1.0).epsilon(1e-13));
          for (double p = 1.25; p < 8.0; p += 0.37) {
            const ModelParams mp{n, sigma, alpha, p, m};
            CHECK((nonlinearity_decay_exponent(mp, m) < -1.0) == admissibility(mp).cond_15.holds);
          }
        }
      }
    }
  }
}

TEST_CASE("integral inequality quadrature against a closed form") {
  // b = 0: int_0^t (1+t-tau)^(-2) dtau = t / (1+t)
  const std::vector<double> grid = {1.0, 3.0, 10.0, 100.0, 1e4};
  const auto r = integral_inequality_check(2.0, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(r.ratios[i] == doctest::Approx(grid[i] / (1.0 + grid[i])).epsilon(1e-10));
  }
  CHECK_THROWS_AS(integral_inequality_check(0.5, 0.9, grid), std::invalid_argument);
  CHECK_THROWS_AS(integral_inequality_check(2.0, 2.0, std::vector<double>{0.5}), std::invalid_argument);
}

TEST_CASE("integral inequality ratios stay bounded") {
  std::vector<double> grid;
  for (double t = 1.0; t <= 1e4; t *= 1.2) grid.push_back(t);
  for (auto [a, b] : {std::pair{2.0, 0.5}, std::pair{1.5, 1.2}, std::pair{3.0, 3.0}, std::pair{1.1, 0.2}}) {
    const auto r = integral_inequality_check(a, b, grid);
    CHECK(r.max_ratio <= 10.0);
    CHECK(r.ratios.back() <= r.max_ratio);
  }
}

TEST_CASE("gagliardo-nirenberg ratio is scale invariant on band-limited fields") {
  SolverConfig c;
  c.grid = GridSpec{1, 512, 60.0};
  c.profile = DataProfile::noise_bandlimited;
  c.amplitude = 1.0;
  const double q = 4.0;
  const double theta = gn_theta(q, 1, 1.0);
  auto ratio = [&](const RealField& y) {
    return lebesgue_norm(y, q) / (std::pow(sobolev_seminorm(y, 1.0), theta) * std::pow(lebesgue_norm(y, 2.0), 1.0 - theta));
  };
  double worst = 0.0;
  double largest = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    c.seed = seed;
    const RealField y = make_data(c);
    const double r = ratio(y);
    const double scaled = ratio(RealField(y.grid, 123.4 * y.values));
    worst = std::max(worst, std::abs(scaled - r) / r);
    largest = std::max(largest, r);
  }
  CHECK(worst <= 1e-12);
  CHECK(std::isfinite(largest));
}

TEST_CASE("theta flags on a (p, n) grid") {
  for (int n : {1, 2, 3}) {
    for (double p = 1.5; p <= 12.0; p += 0.5) {
      const ModelParams mp{n, 1.0, 0.5, p, 1.0};
      const auto r = admissibility(mp);
      const double th2 = gn_theta(2.0 * n * p / (n + 2 * mp.alpha), n, 1.0);
      const double thm = gn_theta(n * p / (n + mp.alpha), n, 1.0);
      CHECK(r.gn_theta_s2.value == doctest::Approx(th2));
      CHECK(r.gn_theta_s2.in_range == (th2 >= -1e-12 && th2 <= 1 + 1e-12));
      CHECK(r.gn_theta_sm.in_range == (thm >= -1e-12 && thm <= 1 + 1e-12));
    }
  }
}

TEST_CASE("report serialization") {
  const auto j = to_json(admissibility(ModelParams{1, 1.0, 0.5, 4.0, 1.0}));
  CHECK(j["overall"] == true);
  CHECK(j["cond_upper_14"]["bound"].is_null());
  CHECK(j["p_crit"] == 3.0);

  std::ostringstream out;
  const std::vector<int> dims = {1, 2, 3};
  const std::vector<double> powers = {2.0, 4.0};
  write_region_csv(out, 1.0, 1.5, 1.0, dims, powers);
  std::istringstream in(out.str());
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 1 + 4);  // n = 1 is skipped because alpha >= n
}
