#pragma once

#include "sigmalab/solver.hpp"
#include "sigmalab/theory.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace sigmalab {

enum class Quantity { u_l2, dtu_l2, hsigma_semi, u_lm };

std::string to_string(Quantity q);
Quantity parse_quantity(const std::string& name);

struct NormTimeSeries {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> dt_l2;
  std::vector<double> hsigma;
  std::vector<double> lm;
  ModelParams params;
  GridSpec grid;
  std::string provenance;
  /// "linear", "decayed" or "growth-detected".
  std::string label;
  std::optional<AdmissibilityReport> admissibility;

  const std::vector<double>& values(Quantity q) const;
  std::size_t size() const { return times.size(); }
};

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fingerprint(const std::string& text);
/// Canonical key=value rendering of every field that affects a run.
std::string canonical_string(const SolverConfig& config);

/// Exact linear flow sampled every `sample_interval` (dt when zero).
NormTimeSeries run_linear(const SolverConfig& config);
/// Full semilinear integration; attaches the admissibility report.
NormTimeSeries run_semilinear(const SolverConfig& config);

NormTimeSeries to_series(const Trajectory& traj, const SolverConfig& config);

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Default window [0.1 t_end, t_end] clamped below at t = 1.
FitWindow default_window(double t_end);

inline constexpr std::size_t kMinFitSamples = 20;

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  FitWindow window;
  double r_squared = 0.0;
  std::size_t samples = 0;
};

/// Ordinary least squares of log(norm) against log(1+t) over the window.
/// Throws std::invalid_argument for windows with t_lo < 1, fewer than 20
/// samples, or a nonpositive norm.
DecayFit fit_decay(const NormTimeSeries& series, Quantity quantity, FitWindow window);

struct RateVerdict {
  Quantity quantity = Quantity::u_l2;
  double slope = 0.0;
  double theory = 0.0;
  double tol = 0.0;
  /// slope <= theory + tol: the measured decay is at least as fast as the estimate.
  bool pass = false;
  /// |slope - theory| <= tol.
  bool sharp = false;
};

/// Compares against decay_exponent with (a, j) = (0,0), (0,1), (sigma,0) for
/// u_l2, dtu_l2 and hsigma_semi respectively.
RateVerdict check_rate(const DecayFit& fit, const ModelParams& params, Quantity quantity, double tol);

nlohmann::json to_json(const DecayFit& fit);
nlohmann::json to_json(const RateVerdict& verdict);

enum class SweepMode { linear, semilinear };

struct SweepRow {
  ModelParams params;
  std::string label;
  std::string error;
  std::vector<DecayFit> fits;  // u_l2, dtu_l2, hsigma_semi
  std::vector<RateVerdict> verdicts;
  std::optional<AdmissibilityReport> admissibility;
};

struct SweepOptions {
  SweepMode mode = SweepMode::linear;
  double tol = 0.05;
  std::optional<FitWindow> window;
  /// 0 uses std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Runs every parameter point on a copy of `base`; failures are recorded in
/// the row. Rows come back sorted by (n, sigma, alpha, p, m).
std::vector<SweepRow> sweep(std::span<const ModelParams> points, const SolverConfig& base,
                            const SweepOptions& options = {});

/// All floats with 17 significant digits.
void write_series_csv(std::ostream& out, const NormTimeSeries& series);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace sigmalab
