#include "sigmalab/propagator.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sigmalab {

void validate(const ModelParams& p) {
  if (p.n < 1 || p.n > 3) throw std::invalid_argument("n must be 1, 2 or 3, got " + std::to_string(p.n));
  if (!(p.sigma >= 1.0) || !std::isfinite(p.sigma)) {
    throw std::invalid_argument("sigma must be >= 1, got " + std::to_string(p.sigma));
  }
  if (!(p.alpha > 0.0 && p.alpha < p.n)) {
    throw std::invalid_argument("alpha must lie in (0, n) = (0, " + std::to_string(p.n) + "), got " +
                                std::to_string(p.alpha));
  }
  if (!(p.p > 1.0) || !std::isfinite(p.p)) {
    throw std::invalid_argument("p must be > 1, got " + std::to_string(p.p));
  }
  if (!(p.m >= 1.0 && p.m <= 2.0)) {
    throw std::invalid_argument("m must lie in [1, 2], got " + std::to_string(p.m));
  }
}

Eigen::ArrayXd mode_weights(const Grid& grid, double sigma) {
  return grid.wavenumber_magnitude().pow(2.0 * sigma);
}

FlowState propagate_linear(const SpectralField& u1, double sigma, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagate_linear: t must be >= 0");
  const Eigen::ArrayXd k = mode_weights(*u1.grid, sigma);
  Eigen::ArrayXcd u(k.size()), ut(k.size());
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    const auto ker = kernels(k[i], t);
    u[i] = ker.K1 * u1.coeffs[i];
    ut[i] = ker.dK1 * u1.coeffs[i];
  }
  return {SpectralField(u1.grid, std::move(u)), SpectralField(u1.grid, std::move(ut))};
}

double decay_exponent(const ModelParams& params, double a, int j) {
  return -(params.n / (2.0 * params.sigma)) * (1.0 / params.m - 0.5) - a / (2.0 * params.sigma) - j;
}

PropagatorKernels<double> ode_oracle(double k, double t) {
  if (!(k >= 0.0)) throw std::invalid_argument("ode_oracle: k must be >= 0");
  if (!(t >= 0.0 && t <= 100.0)) throw std::invalid_argument("ode_oracle: t must lie in [0, 100]");
  namespace odeint = boost::numeric::odeint;
  using State = std::array<long double, 4>;  // (A, dA, K1, dK1)
  const long double kk = k;
  auto rhs = [kk](const State& x, State& dxdt, long double) {
    dxdt[0] = x[1];
    dxdt[1] = -(1 + kk) * x[1] - kk * x[0];
    dxdt[2] = x[3];
    dxdt[3] = -(1 + kk) * x[3] - kk * x[2];
  };
  State x{1, 0, 0, 1};
  if (t > 0.0) {
    auto stepper = odeint::make_controlled(0.0L, 1e-12L, odeint::runge_kutta_fehlberg78<State, long double>());
    const long double dt0 = std::min<long double>(1e-3L, 0.1L / (1 + kk));
    std::size_t steps = 0;
    try {
      steps = odeint::integrate_adaptive(stepper, rhs, x, 0.0L, static_cast<long double>(t), dt0);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("ode_oracle: integrator failure: ") + e.what());
    }
    for (auto v : x) {
      if (!std::isfinite(static_cast<double>(v))) {
        throw std::runtime_error("ode_oracle: integrator produced a non-finite state after " +
                                 std::to_string(steps) + " steps");
      }
    }
  }
  PropagatorKernels<double> r;
  r.k = k;
  r.t = t;
  r.A = static_cast<double>(x[0]);
  r.dA = static_cast<double>(x[1]);
  r.K1 = static_cast<double>(x[2]);
  r.dK1 = static_cast<double>(x[3]);
  return r;
}

double kernel_oracle_error(double k, double t) {
  const auto a = kernels(k, t);
  const auto b = ode_oracle(k, t);
  const double ea[] = {a.A, a.dA, a.K1, a.dK1};
  const double eb[] = {b.A, b.dA, b.K1, b.dK1};
  double scale = 0.0;
  for (double v : eb) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double denom = std::max(std::abs(eb[i]), scale);
    if (denom > 0.0) worst = std::max(worst, std::abs(ea[i] - eb[i]) / denom);
  }
  return worst;
}

}  // namespace sigmalab
