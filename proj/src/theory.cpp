#include "sigmalab/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sigmalab {

double critical_exponent(int n, double m, double sigma) { return 1.0 + 2.0 * m * sigma / n; }

double gn_theta(double q, int n, double sigma) { return (n / sigma) * (0.5 - 1.0 / q); }

std::optional<double> duhamel_decay(double a, double b) {
  if (std::max(a, b) > 1.0) return std::min(a, b);
  return std::nullopt;
}

double nonlinearity_decay_exponent(const ModelParams& params, double s) {
  if (std::abs(s - params.m) > kExponentTolerance && std::abs(s - 2.0) > kExponentTolerance) {
    throw std::invalid_argument("nonlinearity_decay_exponent: s must be m or 2");
  }
  const double n = params.n;
  return -n * params.p / (2.0 * params.m * params.sigma) + (n / (2.0 * params.sigma)) * (1.0 / s + params.alpha / n);
}

AdmissibilityReport admissibility(const ModelParams& params) {
  validate(params);
  const double n = params.n;
  const double sigma = params.sigma;
  const double alpha = params.alpha;
  const double m = params.m;
  const double p = params.p;
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double tol = kExponentTolerance;

  AdmissibilityReport r;
  r.params = params;
  r.p_crit = critical_exponent(params.n, m, sigma);

  r.lower_14.bound = 2.0 / m + 2.0 * alpha / n;
  r.lower_14.holds = p >= r.lower_14.bound - tol;

  r.dim_bound_14 = m < 2.0 ? (4.0 * sigma + std::sqrt(16.0 * sigma * (sigma + m * (2.0 - m) * alpha))) / (2.0 * (2.0 - m))
                           : inf;
  const bool low_branch = n <= 2.0 * sigma + tol;
  if (low_branch) {
    r.branch = "low";
  } else if (n <= r.dim_bound_14 + tol) {
    r.branch = "high";
  } else {
    r.branch = "none";
  }

  if (low_branch) {
    r.upper_14 = {inf, true, false};
  } else {
    r.upper_14.bound = (n + 2.0 * alpha) / (n - 2.0 * sigma);
    r.upper_14.holds = p <= r.upper_14.bound + tol;
    r.upper_14.applicable = true;
  }

  r.cond_15.bound = 1.0 + (2.0 * sigma + alpha) * m / n;
  r.cond_15.holds = p > r.cond_15.bound + tol;

  r.gn_q_s2.value = 2.0 * n * p / (n + 2.0 * alpha);
  r.gn_q_sm.value = m * n * p / (n + m * alpha);
  r.gn_q_s2.in_range = r.gn_q_s2.value > 1.0;
  r.gn_q_sm.in_range = r.gn_q_sm.value > 1.0;
  r.gn_theta_s2.value = gn_theta(r.gn_q_s2.value, params.n, sigma);
  r.gn_theta_sm.value = gn_theta(r.gn_q_sm.value, params.n, sigma);
  auto unit = [&](double th) { return th >= -tol && th <= 1.0 + tol; };
  r.gn_theta_s2.in_range = unit(r.gn_theta_s2.value);
  r.gn_theta_sm.in_range = unit(r.gn_theta_sm.value);

  r.riesz_q_s2.value = 2.0 * n / (n + 2.0 * alpha);
  r.riesz_q_sm.value = m * n / (n + m * alpha);
  auto riesz_ok = [&](double q) { return q > 1.0 + tol && q < n / alpha - tol; };
  r.riesz_q_s2.in_range = riesz_ok(r.riesz_q_s2.value);
  r.riesz_q_sm.in_range = riesz_ok(r.riesz_q_sm.value);

  r.overall = r.lower_14.holds && (!r.upper_14.applicable || r.upper_14.holds) && r.branch != "none" &&
              r.cond_15.holds;

  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
  };
  if (!r.riesz_q_s2.in_range) {
    r.warnings.push_back("Riesz bound into L^2 needs q = 2n/(n+2alpha) = " + fmt(r.riesz_q_s2.value) +
                         " in (1, n/alpha); hypothesis fails");
  }
  if (!r.riesz_q_sm.in_range) {
    r.warnings.push_back("Riesz bound into L^m needs q = mn/(n+m alpha) = " + fmt(r.riesz_q_sm.value) +
                         " in (1, n/alpha); hypothesis fails");
  }
  if (!r.gn_theta_s2.in_range) {
    r.warnings.push_back("Gagliardo-Nirenberg theta for q = " + fmt(r.gn_q_s2.value) + " is " +
                         fmt(r.gn_theta_s2.value) + ", outside [0, 1]");
  }
  if (!r.gn_theta_sm.in_range) {
    r.warnings.push_back("Gagliardo-Nirenberg theta for q = " + fmt(r.gn_q_sm.value) + " is " +
                         fmt(r.gn_theta_sm.value) + ", outside [0, 1]");
  }
  return r;
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json to_json(const BoundCheck& b) {
  return {{"bound", finite_or_null(b.bound)}, {"holds", b.holds}, {"applicable", b.applicable}};
}

nlohmann::json to_json(const RangeCheck& c) { return {{"value", finite_or_null(c.value)}, {"in_range", c.in_range}}; }

}  // namespace

nlohmann::json to_json(const AdmissibilityReport& r) {
  return {
      {"params",
       {{"n", r.params.n}, {"sigma", r.params.sigma}, {"alpha", r.params.alpha}, {"p", r.params.p}, {"m", r.params.m}}},
      {"p_crit", r.p_crit},
      {"cond_lower_14", to_json(r.lower_14)},
      {"cond_upper_14", to_json(r.upper_14)},
      {"dim_bound_14", finite_or_null(r.dim_bound_14)},
      {"branch", r.branch},
      {"cond_15", to_json(r.cond_15)},
      {"gn_q_s2", to_json(r.gn_q_s2)},
      {"gn_q_sm", to_json(r.gn_q_sm)},
      {"gn_theta_s2", to_json(r.gn_theta_s2)},
      {"gn_theta_sm", to_json(r.gn_theta_sm)},
      {"riesz_q_s2", to_json(r.riesz_q_s2)},
      {"riesz_q_sm", to_json(r.riesz_q_sm)},
      {"overall", r.overall},
      {"warnings", r.warnings},
  };
}

void write_region_csv(std::ostream& out, double sigma, double alpha, double m, std::span<const int> dims,
                      std::span<const double> powers) {
  out << "n,p,sigma,alpha,m,p_crit,lower_14,upper_14,dim_bound_14,branch,cond_15,lower_ok,upper_ok,cond_15_ok,"
         "theta_s2,theta_sm,theta_s2_ok,theta_sm_ok,riesz_q_s2_ok,riesz_q_sm_ok,overall\n";
  out << std::setprecision(17);
  for (int n : dims) {
    if (!(alpha < n)) continue;
    for (double p : powers) {
      const auto r = admissibility(ModelParams{n, sigma, alpha, p, m});
      out << n << ',' << p << ',' << sigma << ',' << alpha << ',' << m << ',' << r.p_crit << ',' << r.lower_14.bound
          << ',' << r.upper_14.bound << ',' << r.dim_bound_14 << ',' << r.branch << ',' << r.cond_15.bound << ','
          << r.lower_14.holds << ',' << r.upper_14.holds << ',' << r.cond_15.holds << ',' << r.gn_theta_s2.value
          << ',' << r.gn_theta_sm.value << ',' << r.gn_theta_s2.in_range << ',' << r.gn_theta_sm.in_range << ','
          << r.riesz_q_s2.in_range << ',' << r.riesz_q_sm.in_range << ',' << r.overall << '\n';
    }
  }
}

IntegralInequalityCheck integral_inequality_check(double a, double b, std::span<const double> t_grid) {
  if (!(std::max(a, b) > 1.0)) throw std::invalid_argument("integral inequality needs max{a, b} > 1");
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double decay = std::min(a, b);
  IntegralInequalityCheck out;
  for (double t : t_grid) {
    if (!(t >= 1.0 && t <= 1e4)) throw std::invalid_argument("integral inequality grid must lie in [1, 1e4]");
    auto f = [&](double tau) { return std::pow(1.0 + t - tau, -a) * std::pow(1.0 + tau, -b); };
    // Both factors vary on an O(1) scale near their own endpoint; split there.
    double integral = 0.0;
    const double edge = std::min(1.0, 0.5 * t);
    integral += GK::integrate(f, 0.0, edge, 20, 1e-10);
    if (t - edge > edge) integral += GK::integrate(f, edge, t - edge, 20, 1e-10);
    integral += GK::integrate(f, t - edge, t, 20, 1e-10);
    const double ratio = integral / std::pow(1.0 + t, -decay);
    out.ratios.push_back(ratio);
    if (ratio > out.max_ratio) {
      out.max_ratio = ratio;
      out.t_at_max = t;
    }
  }
  return out;
}

}  // namespace sigmalab
