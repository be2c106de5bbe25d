#include "sigmalab/decay_lab.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace sigmalab;

namespace {

NormTimeSeries power_law(double scale, double exponent) {
  NormTimeSeries s;
  for (int i = 0; i <= 1000; ++i) {
    const double t = i;
    const double v = scale * std::pow(1.0 + t, exponent);
    s.times.push_back(t);
    s.l2.push_back(v);
    s.dt_l2.push_back(v);
    s.hsigma.push_back(v);
    s.lm.push_back(v);
  }
  return s;
}

SolverConfig wide_linear_config() {
  SolverConfig c;
  c.params = ModelParams{1, 1.0, 0.5, 4.0, 1.0};
  c.grid = GridSpec{1, 32768, 4000.0};
  c.t_end = 1000.0;
  c.sample_interval = 1.0;
  return c;
}

}  // namespace

TEST_CASE("fit recovers exact power laws") {
  const DecayFit a = fit_decay(power_law(1.0, -0.25), Quantity::u_l2, {10.0, 1000.0});
  CHECK(std::abs(a.slope + 0.25) <= 1e-12);
  CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.samples == 991);

  const DecayFit b = fit_decay(power_law(3.0, -1.25), Quantity::dtu_l2, {1.0, 500.0});
  CHECK(std::abs(b.slope + 1.25) <= 1e-12);
  CHECK(b.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(b.stderr_slope <= 1e-12);
}

TEST_CASE("fit rejects bad windows") {
  const NormTimeSeries s = power_law(1.0, -0.5);
  CHECK_THROWS_AS(fit_decay(s, Quantity::u_l2, {0.5, 100.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_decay(s, Quantity::u_l2, {10.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_decay(s, Quantity::u_l2, {2000.0, 3000.0}), std::invalid_argument);
  NormTimeSeries z = s;
  z.l2[50] = 0.0;
  CHECK_THROWS_AS(fit_decay(z, Quantity::u_l2, {10.0, 100.0}), std::invalid_argument);
}

TEST_CASE("rate verdicts are one-sided") {
  const ModelParams params{1, 1.0, 0.5, 4.0, 1.0};
  DecayFit fit;
  fit.slope = -0.26;
  RateVerdict v = check_rate(fit, params, Quantity::u_l2, 0.05);
  CHECK(v.theory == doctest::Approx(-0.25));
  CHECK(v.pass);
  CHECK(v.sharp);

  fit.slope = -0.10;
  v = check_rate(fit, params, Quantity::u_l2, 0.05);
  CHECK_FALSE(v.pass);
  CHECK_FALSE(v.sharp);

  fit.slope = -0.90;
  v = check_rate(fit, params, Quantity::u_l2, 0.05);
  CHECK(v.pass);
  CHECK_FALSE(v.sharp);

  CHECK(check_rate(fit, params, Quantity::dtu_l2, 0.05).theory == doctest::Approx(-1.25));
  CHECK(check_rate(fit, params, Quantity::hsigma_semi, 0.05).theory == doctest::Approx(-0.75));
  CHECK_THROWS_AS(check_rate(fit, params, Quantity::u_lm, 0.05), std::invalid_argument);
  for (double s = -3.0; s <= -0.25; s += 0.01) {
    fit.slope = s;
    CHECK(check_rate(fit, params, Quantity::u_l2, 0.0).pass);
  }
}

TEST_CASE("linear gaussian run: L2 peaks early then decays at the estimate rate") {
  const NormTimeSeries s = run_linear(wide_linear_config());
  CHECK(s.label == "linear");
  // Low modes follow (e^{-kt} - e^{-t}) / (1 - k) and keep rising until ln(1/k), so the peak sits past t = 2.
  CHECK(s.l2[2] > s.l2[1]);
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.times[i - 1] >= 3.0) CHECK(s.l2[i] <= s.l2[i - 1]);
  }
  const DecayFit fit = fit_decay(s, Quantity::u_l2, {100.0, 1000.0});
  CHECK(fit.slope == doctest::Approx(-0.25).epsilon(0.2));
}

TEST_CASE("mean-zero data decays faster") {
  SolverConfig c = wide_linear_config();
  c.mean_zero = true;
  const DecayFit fit = fit_decay(run_linear(c), Quantity::u_l2, {100.0, 1000.0});
  CAPTURE(fit.slope);
  CHECK(fit.slope <= -0.7);
}

TEST_CASE("zero data gives a zero series") {
  SolverConfig c;
  c.grid = GridSpec{1, 1024, suggested_box_length(50.0, 1.0)};
  c.t_end = 50.0;
  c.amplitude = 0.0;
  for (const auto& s : {run_linear(c), run_semilinear(c)}) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s.l2[i] == 0.0);
      CHECK(s.dt_l2[i] == 0.0);
    }
  }
}

TEST_CASE("linear runs respect the box horizon") {
  SolverConfig c;
  c.grid = GridSpec{1, 1024, 100.0};
  c.t_end = 100.0;
  CHECK_THROWS_AS(run_linear(c), std::invalid_argument);
}

TEST_CASE("semilinear runs carry their admissibility report") {
  SolverConfig c;
  c.grid = GridSpec{1, 2048, suggested_box_length(100.0, 1.0)};
  c.t_end = 100.0;
  const NormTimeSeries s = run_semilinear(c);
  REQUIRE(s.admissibility.has_value());
  CHECK(s.admissibility->overall);
  CHECK(s.label == "decayed");
  CHECK(s.times.back() == doctest::Approx(100.0));
}

TEST_CASE("exploratory subcritical run is labelled") {
  SolverConfig c;
  c.params.p = 2.0;
  c.amplitude = 1.0;
  c.grid = GridSpec{1, 2048, suggested_box_length(100.0, 1.0)};
  c.t_end = 100.0;
  const NormTimeSeries s = run_semilinear(c);
  CHECK((s.label == "decayed" || s.label == "growth-detected"));
  CHECK_FALSE(s.admissibility->overall);
}

TEST_CASE("linear series is resolution independent") {
  SolverConfig c;
  c.grid = GridSpec{1, 1024, 100.0};
  c.t_end = 20.0;
  c.sample_interval = 1.0;
  const NormTimeSeries coarse = run_linear(c);
  c.grid.points = 2048;
  const NormTimeSeries fine = run_linear(c);
  REQUIRE(coarse.size() == fine.size());
  for (std::size_t i = 1; i < coarse.size(); ++i) {
    CHECK(std::abs(coarse.l2[i] - fine.l2[i]) <= 1e-10 * fine.l2[i]);
    CHECK(std::abs(coarse.dt_l2[i] - fine.dt_l2[i]) <= 1e-10 * fine.dt_l2[i]);
    CHECK(std::abs(coarse.hsigma[i] - fine.hsigma[i]) <= 1e-10 * fine.hsigma[i]);
    CHECK(std::abs(coarse.lm[i] - fine.lm[i]) <= 1e-10 * fine.lm[i]);
  }
}

TEST_CASE("series CSV is reproducible") {
  SolverConfig c;
  c.grid = GridSpec{1, 1024, suggested_box_length(30.0, 1.0)};
  c.t_end = 30.0;
  c.profile = DataProfile::noise_bandlimited;
  c.seed = 42;
  std::ostringstream a, b;
  write_series_csv(a, run_linear(c));
  write_series_csv(b, run_linear(c));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("t,L2,dtL2,Hsigma,Lm\n", 0) == 0);
  CHECK(run_linear(c).provenance == fingerprint("linear;" + canonical_string(c)));
  SolverConfig d = c;
  d.seed = 43;
  CHECK(canonical_string(c) != canonical_string(d));
}

TEST_CASE("fingerprint") {
  CHECK(fingerprint("") == "cbf29ce484222325");
  CHECK(fingerprint("a") == "af63dc4c8601ec8c");
}

TEST_CASE("sweep over m reproduces the L^m rates") {
  SolverConfig base = wide_linear_config();
  base.profile = DataProfile::critical_tail;
  const std::vector<ModelParams> points = {
      {1, 1.0, 0.5, 4.0, 2.0}, {1, 1.0, 0.5, 4.0, 1.0}, {1, 1.0, 0.5, 4.0, 1.5}};
  SweepOptions options;
  options.window = FitWindow{100.0, 1000.0};
  const auto rows = sweep(points, base, options);
  REQUIRE(rows.size() == 3);
  const double targets[] = {-0.25, -1.0 / 12.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(rows[i].error.empty());
    CHECK(rows[i].params.m == doctest::Approx(1.0 + 0.5 * i));
    CHECK(std::abs(rows[i].fits[0].slope - targets[i]) <= 0.05);
    CHECK(rows[i].verdicts[0].pass);
  }
}

TEST_CASE("empty sweep") { CHECK(sweep({}, SolverConfig{}).empty()); }

TEST_CASE("sweep rows fail independently") {
  SolverConfig base;
  base.grid = GridSpec{1, 1024, suggested_box_length(40.0, 1.0)};
  base.t_end = 40.0;
  base.amplitude = 0.5;
  const std::vector<ModelParams> points = {{1, 1.0, 0.5, 1.5, 1.0}, {1, 1.0, 0.5, 4.0, 1.0}};
  SweepOptions options;
  options.mode = SweepMode::semilinear;
  const auto rows = sweep(points, base, options);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].label == "growth-detected");
  CHECK(rows[1].label == "decayed");
  CHECK(rows[1].error.empty());
  CHECK(rows[1].fits.size() == 3);

  std::ostringstream out;
  write_sweep_csv(out, rows);
  std::istringstream in(out.str());
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 3);
}
