#pragma once

#include "sigmalab/propagator.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace sigmalab {

/// Tolerance for every exponent comparison.
inline constexpr double kExponentTolerance = 1e-12;

/// 1 + 2 m sigma / n.
double critical_exponent(int n, double m, double sigma);

/// theta_q = (n / sigma)(1/2 - 1/q); callers check membership in [0, 1].
double gn_theta(double q, int n, double sigma);

/// min{a, b} when max{a, b} > 1, otherwise empty.
std::optional<double> duhamel_decay(double a, double b);

/// Exponent of (1+tau) bounding ||u(tau)||^p in L^(snp/(n+s alpha)):
/// -np/(2 m sigma) + (n/(2 sigma))(1/s + alpha/n), for s in {m, 2}.
double nonlinearity_decay_exponent(const ModelParams& params, double s);

struct BoundCheck {
  double bound = 0.0;
  bool holds = false;
  bool applicable = true;
};

struct RangeCheck {
  double value = 0.0;
  bool in_range = false;
};

struct AdmissibilityReport {
  ModelParams params;
  double p_crit = 0.0;
  /// p >= 2/m + 2 alpha/n.
  BoundCheck lower_14;
  /// p <= (n + 2 alpha)/(n - 2 sigma), applicable only when 2 sigma < n.
  BoundCheck upper_14;
  /// Upper end of the 2 sigma < n dimension branch (+inf when m = 2).
  double dim_bound_14 = 0.0;
  /// "low" for 1 <= n <= 2 sigma, "high" for 2 sigma < n <= dim_bound_14, "none" otherwise.
  std::string branch;
  /// p > 1 + (2 sigma + alpha) m / n.
  BoundCheck cond_15;
  /// Gagliardo-Nirenberg exponents for q = 2np/(n+2 alpha) and q = mnp/(n+m alpha).
  RangeCheck gn_q_s2, gn_q_sm;
  RangeCheck gn_theta_s2, gn_theta_sm;
  /// Hardy-Littlewood-Sobolev exponents 2n/(n+2 alpha) and mn/(n+m alpha), flagged for membership in (1, n/alpha).
  RangeCheck riesz_q_s2, riesz_q_sm;
  bool overall = false;
  std::vector<std::string> warnings;
};

AdmissibilityReport admissibility(const ModelParams& params);

nlohmann::json to_json(const AdmissibilityReport& report);

/// One CSV row per (n, p) pair at fixed sigma, alpha, m. Pairs with alpha >= n
/// are skipped.
void write_region_csv(std::ostream& out, double sigma, double alpha, double m, std::span<const int> dims,
                      std::span<const double> powers);

struct IntegralInequalityCheck {
  double max_ratio = 0.0;
  double t_at_max = 0.0;
  std::vector<double> ratios;
};

/// Quadrature of int_0^t (1+t-tau)^(-a) (1+tau)^(-b) dtau for each t in the
/// grid, divided by (1+t)^(-min{a,b}). Requires max{a,b} > 1 and t in [1, 1e4].
IntegralInequalityCheck integral_inequality_check(double a, double b, std::span<const double> t_grid);

}  // namespace sigmalab
