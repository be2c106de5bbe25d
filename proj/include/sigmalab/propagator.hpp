#pragma once

#include "sigmalab/field.hpp"
#include "sigmalab/kernels.hpp"

#include <utility>

namespace sigmalab {

/// Exponents of the model u_tt + (-Delta)^sigma u + u_t + (-Delta)^sigma u_t = I_alpha(|u|^p)
/// with data in L^m.
struct ModelParams {
  int n = 1;
  double sigma = 1.0;
  double alpha = 0.5;
  double p = 4.0;
  double m = 1.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ModelParams& params);

/// Per-mode weight k = |xi|^(2 sigma) for every grid mode.
Eigen::ArrayXd mode_weights(const Grid& grid, double sigma);

struct FlowState {
  SpectralField u;
  SpectralField ut;
};

/// Solution of the linear problem with u(0) = 0, u_t(0) = u1 at time t.
FlowState propagate_linear(const SpectralField& u1, double sigma, double t);

/// Exponent of (1+t) in the (L^m cap L^2) - L^2 estimate for
/// ||d_t^j (-Delta)^(a/2) u||_2; m = 2 gives the L^2 - L^2 exponent.
double decay_exponent(const ModelParams& params, double a, int j);

/// Independent check of kernels(): integrates both fundamental solutions of
/// the per-mode ODE with an adaptive Runge-Kutta-Fehlberg 7(8) scheme at
/// local tolerance 1e-12. Requires 0 <= t <= 100. Throws std::runtime_error
/// when the integrator cannot reach t.
PropagatorKernels<double> ode_oracle(double k, double t);

/// Largest entrywise discrepancy between kernels(k, t) and ode_oracle(k, t).
/// Each entry is scaled by max(|entry|, largest kernel magnitude at (k, t)),
/// so entries that cross zero are judged against the kernel matrix.
double kernel_oracle_error(double k, double t);

}  // namespace sigmalab
