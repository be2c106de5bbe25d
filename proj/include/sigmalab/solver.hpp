#pragma once

#include "sigmalab/field.hpp"
#include "sigmalab/kernels.hpp"
#include "sigmalab/propagator.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigmalab {

enum class DataProfile {
  gaussian,
  bump,
  noise_bandlimited,
  /// Spectral profile |xi|^(-n(1-1/m)) exp(-|xi|^2/2): the slowest data the
  /// L^m estimate allows, used to probe sharpness for m > 1.
  critical_tail,
};

std::string to_string(DataProfile profile);
/// Throws std::invalid_argument on an unknown name.
DataProfile parse_profile(const std::string& name);

struct SolverConfig {
  ModelParams params;
  GridSpec grid;
  double dt = 0.1;
  double t_end = 200.0;
  bool dealias = true;
  double amplitude = 0.01;
  DataProfile profile = DataProfile::gaussian;
  bool mean_zero = false;
  std::uint64_t seed = 0;
  /// Test hook: drop the right-hand side entirely.
  bool nonlinear = true;
  /// Time between recorded snapshots; 0 records every step.
  double sample_interval = 0.0;
  /// Keep full spectral states, not only their norms.
  bool store_states = false;
};

/// Range checks on dt, t_end, amplitude and the embedded params/grid.
void validate(const SolverConfig& config);

/// Largest t_end for which the periodic box still resolves continuum decay:
/// 0.1 (L / 2 pi)^(2 sigma).
double box_horizon(double length, double sigma);
/// Box length whose horizon is exactly t_end: 2 pi (10 t_end)^(1/(2 sigma)).
double suggested_box_length(double t_end, double sigma);

/// Raised when the state or the nonlinearity stops being finite.
class BlowUpSignal : public std::runtime_error {
 public:
  BlowUpSignal(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

RealField make_data(const SolverConfig& config);

/// Zeroes every mode with max_d |j_d| > N/3.
SpectralField dealias(const SpectralField& F);

/// I_alpha(|u|^p), optionally dealiased after the pointwise power.
/// Throws BlowUpSignal (time 0) when |u|^p is not finite.
RealField nonlinearity(const RealField& u, const ModelParams& params, bool dealias = true);
SpectralField nonlinearity_spectral(const RealField& u, const ModelParams& params, bool dealias = true);

/// Second-order exponential integrator built on the exact kernels. The
/// homogeneous part of each step is the kernel matrix [[A, K1], [dA, dK1]];
/// the Duhamel increment uses a forcing predictor at step start and a
/// linear-in-time corrector through the predicted endpoint.
class EtdStepper {
 public:
  EtdStepper(GridPtr grid, const ModelParams& params, double dt, bool dealias = true, bool nonlinear = true);

  double dt() const { return dt_; }
  /// Advances one step. Throws BlowUpSignal if the result is not finite.
  FlowState step(const FlowState& state) const;
  /// Same as step() but reuses the forcing at step start if the caller has it.
  FlowState step(const FlowState& state, const SpectralField& forcing_start) const;
  SpectralField forcing(const SpectralField& u) const;

 private:
  GridPtr grid_;
  ModelParams params_;
  double dt_;
  bool dealias_;
  bool nonlinear_;
  Eigen::ArrayXd A_, K1_, dA_, dK1_;
  Eigen::ArrayXd wu0_, wu1_, wv0_, wv1_;
};

FlowState etd_step(const FlowState& state, double dt, const ModelParams& params, bool dealias = true);

struct NormRecord {
  double t = 0.0;
  double l2 = 0.0;
  double dt_l2 = 0.0;
  double hsigma = 0.0;
  double lm = 0.0;
  /// Sum of the three decay-weighted terms of the X(T) norm at t.
  double weighted_sum = 0.0;
};

/// (1+t)^a with a = (n/(2 sigma))(1/m - 1/2), the base weight of X(T).
double xt_base_exponent(const ModelParams& params);

NormRecord measure(const FlowState& state, const ModelParams& params, double t);

enum class Termination { completed, blow_up };

struct Trajectory {
  ModelParams params;
  GridPtr grid;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<NormRecord> norms;
  /// Filled only when states are stored.
  std::vector<FlowState> states;
  /// Last state reached, including the one that tripped a blow-up check.
  std::optional<FlowState> final_state;
  Termination termination = Termination::completed;
  double blowup_time = 0.0;
  long long steps_taken = 0;
  std::string message;
};

Trajectory integrate(const SolverConfig& config);
Trajectory integrate(const SolverConfig& config, const RealField& u1);

/// Writes t, L2, dtL2, Hsigma_semi, Lm, weighted_sum with 17 significant digits.
void write_norms_csv(std::ostream& out, const Trajectory& traj);

struct XTNorm {
  double value = 0.0;
  double sup_l2 = 0.0;
  double sup_hsigma = 0.0;
  double sup_dt = 0.0;
};

XTNorm xt_norm(const Trajectory& traj, const ModelParams& params);
/// X(T) norm of the pointwise-in-time difference of two state sequences.
double xt_distance(const std::vector<FlowState>& a, const std::vector<FlowState>& b,
                   const std::vector<double>& times, const ModelParams& params);

/// Densest snapshot spacing accepted by picard_apply.
inline constexpr double kPicardMaxSpacing = 0.05;
inline constexpr double kPicardMaxHorizon = 10.0;

/// Trajectory with zero states on the uniform grid 0, dt, ..., t_end.
Trajectory zero_trajectory(const SolverConfig& config, const GridPtr& grid);

/// Nonlinear part of O(u): trapezoidal quadrature over the stored snapshots
/// of int_0^t K1(t - tau) F(I_alpha(|u(tau)|^p)) dtau, and of its time derivative.
std::vector<FlowState> duhamel_part(const Trajectory& traj_in, const SolverConfig& config);

/// O(u) = linear flow of u1 + duhamel_part(u), on the snapshot times of traj_in.
Trajectory picard_apply(const Trajectory& traj_in, const RealField& u1, const SolverConfig& config);

struct PicardRun {
  std::vector<Trajectory> iterates;  // u^1, u^2, ...
  /// distances[k-1] = ||u^k - u^(k-1)||_X(T), starting from u^0 = 0.
  std::vector<double> distances;
};

/// Picard iteration from zero. Consecutive differences are formed from the
/// Duhamel parts, since the linear part is shared by every iterate.
PicardRun picard_iterate(const RealField& u1, const SolverConfig& config, int iterations);

}  // namespace sigmalab
