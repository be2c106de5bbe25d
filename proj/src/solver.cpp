#include "sigmalab/solver.hpp"

#include "sigmalab/multiplier.hpp"
#include "sigmalab/norms.hpp"
#include "sigmalab/transform.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

namespace sigmalab {

namespace {

constexpr double kBlowUpFactor = 1e6;
constexpr double kPowerFloor = 1e-300;

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 * std::numbers::pi / 3.0;
  }
}

bool all_finite(const Eigen::ArrayXcd& a) { return a.real().allFinite() && a.imag().allFinite(); }

std::size_t step_count(double t_end, double dt) {
  return static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
}

}  // namespace

std::string to_string(DataProfile profile) {
  switch (profile) {
    case DataProfile::gaussian: return "gaussian";
    case DataProfile::bump: return "bump";
    case DataProfile::noise_bandlimited: return "noise_bandlimited";
    case DataProfile::critical_tail: return "critical_tail";
  }
  return "unknown";
}

DataProfile parse_profile(const std::string& name) {
  if (name == "gaussian") return DataProfile::gaussian;
  if (name == "bump") return DataProfile::bump;
  if (name == "noise_bandlimited") return DataProfile::noise_bandlimited;
  if (name == "critical_tail") return DataProfile::critical_tail;
  throw std::invalid_argument("unknown data profile '" + name + "'");
}

void validate(const SolverConfig& c) {
  validate(c.params);
  validate(c.grid);
  if (c.grid.dim != c.params.n) {
    throw std::invalid_argument("grid dim " + std::to_string(c.grid.dim) + " differs from model dimension n = " +
                                std::to_string(c.params.n));
  }
  if (!(c.dt > 0.0 && c.dt <= 0.5)) throw std::invalid_argument("dt must lie in (0, 0.5]");
  if (!(c.t_end >= c.dt) || !std::isfinite(c.t_end)) throw std::invalid_argument("t_end must be >= dt");
  if (!(c.amplitude >= 0.0) || !std::isfinite(c.amplitude)) {
    throw std::invalid_argument("data amplitude must be finite and >= 0");
  }
  if (!(c.sample_interval >= 0.0)) throw std::invalid_argument("sample_interval must be >= 0");
}

double box_horizon(double length, double sigma) {
  return 0.1 * std::pow(length / (2.0 * std::numbers::pi), 2.0 * sigma);
}

double suggested_box_length(double t_end, double sigma) {
  return 2.0 * std::numbers::pi * std::pow(10.0 * t_end, 1.0 / (2.0 * sigma));
}

RealField make_data(const SolverConfig& config) {
  auto grid = build_grid(config.grid);
  const auto& x = grid->coordinates();
  const double eps = config.amplitude;
  const Eigen::Index size = grid->size();
  Eigen::ArrayXd values(size);

  switch (config.profile) {
    case DataProfile::gaussian: {
      const Eigen::ArrayXd r2 = x.square().colwise().sum().transpose();
      values = eps * (-0.5 * r2).exp();
      if (config.mean_zero) values *= x.row(0).transpose();
      break;
    }
    case DataProfile::bump: {
      for (Eigen::Index i = 0; i < size; ++i) {
        const double r2 = x.col(i).square().sum();
        values[i] = r2 < 1.0 ? eps * std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
      }
      if (config.mean_zero) values *= x.row(0).transpose();
      break;
    }
    case DataProfile::noise_bandlimited: {
      std::mt19937_64 rng(config.seed);
      std::normal_distribution<double> normal;
      const double band = grid->points() / 8.0;
      SpectralField F(grid);
      for (Eigen::Index i = 0; i < size; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        if (grid->max_abs_index()[i] <= band) F.coeffs[i] = {re, im};
      }
      if (config.mean_zero) F.coeffs[0] = 0.0;
      // Real part of the complex inverse is the Hermitian projection.
      values = transform_inverse_complex(F).real();
      const double peak = values.abs().maxCoeff();
      values *= peak > 0.0 ? eps / peak : 0.0;
      break;
    }
    case DataProfile::critical_tail: {
      const int n = config.params.n;
      const double e = -n * (1.0 - 1.0 / config.params.m);
      const auto& xi = grid->wavenumber_magnitude();
      SpectralField F(grid);
      for (Eigen::Index i = 1; i < size; ++i) F.coeffs[i] = eps * std::pow(xi[i], e) * std::exp(-0.5 * xi[i] * xi[i]);
      if (!config.mean_zero) {
        // Average of |xi|^e over the ball with the volume of one dual cell.
        const double dual = std::pow(2.0 * std::numbers::pi / grid->length(), n);
        const double radius = std::pow(dual / unit_ball_volume(n), 1.0 / n);
        F.coeffs[0] = eps * n / (n + e) * std::pow(radius, e);
      }
      values = transform_inverse(F).values;
      break;
    }
  }
  return RealField(grid, std::move(values));
}

SpectralField dealias(const SpectralField& F) {
  const double cutoff = F.grid->points() / 3.0;
  const auto& jmax = F.grid->max_abs_index();
  SpectralField out = F;
  for (Eigen::Index i = 0; i < out.coeffs.size(); ++i) {
    if (jmax[i] > cutoff) out.coeffs[i] = 0.0;
  }
  return out;
}

namespace {

Eigen::ArrayXd forcing_symbol(const Grid& grid, double alpha, bool dealiased) {
  const auto& xi = grid.wavenumber_magnitude();
  const auto& jmax = grid.max_abs_index();
  const double cutoff = grid.points() / 3.0;
  Eigen::ArrayXd s(grid.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (xi[i] == 0.0 || (dealiased && jmax[i] > cutoff)) {
      s[i] = 0.0;
    } else {
      s[i] = std::pow(xi[i], -alpha);
    }
  }
  return s;
}

RealField power_of_abs(const RealField& u, double p) {
  Eigen::ArrayXd w = u.values.abs().max(kPowerFloor).pow(p);
  if (!w.allFinite()) throw BlowUpSignal("|u|^p overflowed", 0.0);
  return RealField(u.grid, std::move(w));
}

}  // namespace

SpectralField nonlinearity_spectral(const RealField& u, const ModelParams& params, bool dealiased) {
  SpectralField F = transform_forward(power_of_abs(u, params.p));
  F.coeffs *= forcing_symbol(*u.grid, params.alpha, dealiased);
  if (!all_finite(F.coeffs)) throw BlowUpSignal("nonlinearity is not finite", 0.0);
  return F;
}

RealField nonlinearity(const RealField& u, const ModelParams& params, bool dealiased) {
  if (!(params.alpha > 0.0 && params.alpha < u.grid->dim())) {
    throw std::invalid_argument("alpha must lie in (0, n)");
  }
  return transform_inverse(nonlinearity_spectral(u, params, dealiased));
}

EtdStepper::EtdStepper(GridPtr grid, const ModelParams& params, double dt, bool dealiased, bool nonlinear)
    : grid_(std::move(grid)), params_(params), dt_(dt), dealias_(dealiased), nonlinear_(nonlinear) {
  if (!(dt > 0.0)) throw std::invalid_argument("EtdStepper: dt must be positive");
  const Eigen::ArrayXd k = mode_weights(*grid_, params.sigma);
  const Eigen::Index n = k.size();
  A_.resize(n);
  K1_.resize(n);
  dA_.resize(n);
  dK1_.resize(n);
  wu0_.resize(n);
  wu1_.resize(n);
  wv0_.resize(n);
  wv1_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ker = kernels(k[i], dt);
    A_[i] = ker.A;
    K1_[i] = ker.K1;
    dA_[i] = ker.dA;
    dK1_[i] = ker.dK1;
    if (nonlinear) {
      const auto w = duhamel_weights(k[i], dt);
      wu0_[i] = w.u0;
      wu1_[i] = w.u1;
      wv0_[i] = w.v0;
      wv1_[i] = w.v1;
    }
  }
}

SpectralField EtdStepper::forcing(const SpectralField& u) const {
  return nonlinearity_spectral(transform_inverse(u), params_, dealias_);
}

FlowState EtdStepper::step(const FlowState& state) const {
  if (!nonlinear_) return step(state, SpectralField(grid_));
  return step(state, forcing(state.u));
}

FlowState EtdStepper::step(const FlowState& s, const SpectralField& f0) const {
  const Eigen::ArrayXcd& u = s.u.coeffs;
  const Eigen::ArrayXcd& v = s.ut.coeffs;
  Eigen::ArrayXcd hu = A_ * u + K1_ * v;
  Eigen::ArrayXcd hv = dA_ * u + dK1_ * v;
  if (nonlinear_) {
    const Eigen::ArrayXcd& F0 = f0.coeffs;
    const SpectralField predicted(grid_, hu + wu0_ * F0);
    const Eigen::ArrayXcd dF = forcing(predicted).coeffs - F0;
    hu += wu0_ * F0 + wu1_ * dF;
    hv += wv0_ * F0 + wv1_ * dF;
  }
  if (!all_finite(hu) || !all_finite(hv)) throw BlowUpSignal("state is not finite", 0.0);
  return {SpectralField(grid_, std::move(hu)), SpectralField(grid_, std::move(hv))};
}

FlowState etd_step(const FlowState& state, double dt, const ModelParams& params, bool dealiased) {
  if (!(dt > 0.0 && dt <= 0.5)) throw std::invalid_argument("etd_step: dt must lie in (0, 0.5]");
  return EtdStepper(state.u.grid, params, dt, dealiased).step(state);
}

double xt_base_exponent(const ModelParams& params) {
  return (params.n / (2.0 * params.sigma)) * (1.0 / params.m - 0.5);
}

namespace {

double weighted_sum(const ModelParams& params, double t, double l2, double hsigma, double dt_l2,
                    XTNorm* sup = nullptr) {
  const double a = xt_base_exponent(params);
  const double base = 1.0 + t;
  const double wl2 = std::pow(base, a) * l2;
  const double wh = std::pow(base, a + 0.5) * hsigma;
  const double wdt = std::pow(base, a + 1.0) * dt_l2;
  if (sup) {
    sup->sup_l2 = std::max(sup->sup_l2, wl2);
    sup->sup_hsigma = std::max(sup->sup_hsigma, wh);
    sup->sup_dt = std::max(sup->sup_dt, wdt);
  }
  return wl2 + wh + wdt;
}

}  // namespace

NormRecord measure(const FlowState& state, const ModelParams& params, double t) {
  NormRecord r;
  r.t = t;
  r.l2 = spectral_l2_norm(state.u);
  r.dt_l2 = spectral_l2_norm(state.ut);
  r.hsigma = sobolev_seminorm(state.u, params.sigma);
  r.lm = lebesgue_norm(transform_inverse(state.u), params.m);
  r.weighted_sum = weighted_sum(params, t, r.l2, r.hsigma, r.dt_l2);
  return r;
}

Trajectory integrate(const SolverConfig& config) { return integrate(config, make_data(config)); }

Trajectory integrate(const SolverConfig& config, const RealField& u1) {
  validate(config);
  if (!(u1.grid->spec() == config.grid)) throw std::invalid_argument("data grid differs from config grid");
  const double horizon = box_horizon(config.grid.length, config.params.sigma);
  if (config.t_end > horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("t_end = " + std::to_string(config.t_end) + " exceeds the box-validity horizon " +
                                std::to_string(horizon) + " for L = " + std::to_string(config.grid.length));
  }
  const GridPtr grid = u1.grid;
  const ModelParams& params = config.params;
  const std::size_t n_steps = step_count(config.t_end, config.dt);
  const double dt = config.t_end / static_cast<double>(n_steps);
  std::size_t stride = 1;
  if (config.sample_interval > 0.0) {
    stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.sample_interval / dt)));
  }

  Trajectory traj;
  traj.params = params;
  traj.grid = grid;
  traj.dt = dt;

  const SpectralField U1 = transform_forward(u1);
  FlowState state{SpectralField(grid), U1};
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.norms.push_back(measure(state, params, t));
    if (config.store_states) traj.states.push_back(state);
  };
  record(0.0);

  // Thresholds scale with each norm's initial value, or with the matching
  // norm of the data when the initial value is zero (u(0) = 0).
  const double data_l2 = spectral_l2_norm(U1);
  const NormRecord& first = traj.norms.front();
  const double ref_l2 = first.l2 > 0.0 ? first.l2 : data_l2;
  const double ref_dt = first.dt_l2 > 0.0 ? first.dt_l2 : data_l2;
  const double ref_h = first.hsigma > 0.0 ? first.hsigma : sobolev_seminorm(U1, params.sigma);
  const double ref_lm = first.lm > 0.0 ? first.lm : lebesgue_norm(u1, params.m);
  auto exceeds = [](double value, double ref) { return ref > 0.0 && value > kBlowUpFactor * ref; };

  const EtdStepper stepper(grid, params, dt, config.dealias, config.nonlinear);
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    try {
      state = stepper.step(state);
    } catch (const BlowUpSignal& e) {
      traj.termination = Termination::blow_up;
      traj.blowup_time = t;
      traj.message = e.what();
      break;
    }
    traj.steps_taken = static_cast<long long>(s);
    const double l2 = spectral_l2_norm(state.u);
    const double dt_l2 = spectral_l2_norm(state.ut);
    if (!std::isfinite(l2) || !std::isfinite(dt_l2) || exceeds(l2, ref_l2) || exceeds(dt_l2, ref_dt)) {
      record(t);
      traj.termination = Termination::blow_up;
      traj.blowup_time = t;
      traj.message = "norm growth above threshold";
      break;
    }
    if (s % stride == 0 || s == n_steps) {
      record(t);
      const NormRecord& r = traj.norms.back();
      if (exceeds(r.hsigma, ref_h) || exceeds(r.lm, ref_lm) || !std::isfinite(r.hsigma) || !std::isfinite(r.lm)) {
        traj.termination = Termination::blow_up;
        traj.blowup_time = t;
        traj.message = "norm growth above threshold";
        break;
      }
    }
  }
  traj.final_state = state;
  return traj;
}

void write_norms_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,L2,dtL2,Hsigma_semi,Lm,weighted_sum\n";
  out << std::setprecision(17);
  for (const auto& r : traj.norms) {
    out << r.t << ',' << r.l2 << ',' << r.dt_l2 << ',' << r.hsigma << ',' << r.lm << ',' << r.weighted_sum << '\n';
  }
}

XTNorm xt_norm(const Trajectory& traj, const ModelParams& params) {
  if (traj.norms.empty()) throw std::invalid_argument("xt_norm: empty trajectory");
  XTNorm out;
  for (const auto& r : traj.norms) {
    out.value = std::max(out.value, weighted_sum(params, r.t, r.l2, r.hsigma, r.dt_l2, &out));
  }
  return out;
}

double xt_distance(const std::vector<FlowState>& a, const std::vector<FlowState>& b,
                   const std::vector<double>& times, const ModelParams& params) {
  if (a.size() != b.size() || a.size() != times.size()) {
    throw std::invalid_argument("xt_distance: sequences differ in length");
  }
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SpectralField du(a[i].u.grid, a[i].u.coeffs - b[i].u.coeffs);
    const SpectralField dv(a[i].ut.grid, a[i].ut.coeffs - b[i].ut.coeffs);
    sup = std::max(sup, weighted_sum(params, times[i], spectral_l2_norm(du), sobolev_seminorm(du, params.sigma),
                                     spectral_l2_norm(dv)));
  }
  return sup;
}

Trajectory zero_trajectory(const SolverConfig& config, const GridPtr& grid) {
  const std::size_t n_steps = step_count(config.t_end, config.dt);
  const double dt = config.t_end / static_cast<double>(n_steps);
  Trajectory traj;
  traj.params = config.params;
  traj.grid = grid;
  traj.dt = dt;
  const FlowState zero{SpectralField(grid), SpectralField(grid)};
  for (std::size_t s = 0; s <= n_steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    traj.times.push_back(t);
    traj.states.push_back(zero);
    traj.norms.push_back(NormRecord{t});
  }
  return traj;
}

namespace {

double check_dense(const Trajectory& traj) {
  if (traj.states.size() != traj.times.size() || traj.states.size() < 2) {
    throw std::invalid_argument("Picard map needs a trajectory with stored states");
  }
  if (traj.times.front() != 0.0) throw std::invalid_argument("Picard map needs snapshots starting at t = 0");
  const double h = traj.times[1] - traj.times[0];
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double gap = traj.times[i] - traj.times[i - 1];
    if (std::abs(gap - h) > 1e-9 * h) throw std::invalid_argument("Picard map needs uniformly spaced snapshots");
  }
  if (h > kPicardMaxSpacing * (1.0 + 1e-12)) {
    throw std::invalid_argument("snapshot spacing " + std::to_string(h) + " exceeds " +
                                std::to_string(kPicardMaxSpacing));
  }
  if (traj.times.back() > kPicardMaxHorizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("Picard horizon must not exceed " + std::to_string(kPicardMaxHorizon));
  }
  return h;
}

Trajectory assemble(const GridPtr& grid, const ModelParams& params, double dt, const std::vector<double>& times,
                    std::vector<FlowState> states) {
  Trajectory traj;
  traj.params = params;
  traj.grid = grid;
  traj.dt = dt;
  traj.times = times;
  for (std::size_t i = 0; i < times.size(); ++i) traj.norms.push_back(measure(states[i], params, times[i]));
  traj.states = std::move(states);
  traj.steps_taken = static_cast<long long>(times.size()) - 1;
  return traj;
}

std::vector<FlowState> linear_states(const SpectralField& U1, const ModelParams& params,
                                     const std::vector<double>& times) {
  std::vector<FlowState> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(propagate_linear(U1, params.sigma, t));
  return out;
}

std::vector<FlowState> add(const std::vector<FlowState>& a, const std::vector<FlowState>& b) {
  std::vector<FlowState> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back({SpectralField(a[i].u.grid, a[i].u.coeffs + b[i].u.coeffs),
                   SpectralField(a[i].ut.grid, a[i].ut.coeffs + b[i].ut.coeffs)});
  }
  return out;
}

}  // namespace

std::vector<FlowState> duhamel_part(const Trajectory& traj_in, const SolverConfig& config) {
  const double h = check_dense(traj_in);
  const GridPtr& grid = traj_in.states.front().u.grid;
  const ModelParams& params = config.params;
  const std::size_t M = traj_in.times.size();
  const Eigen::Index N = grid->size();

  std::vector<Eigen::ArrayXcd> F(M);
  for (std::size_t j = 0; j < M; ++j) {
    if (config.nonlinear) {
      try {
        F[j] = nonlinearity_spectral(transform_inverse(traj_in.states[j].u), params, config.dealias).coeffs;
      } catch (const BlowUpSignal& e) {
        throw BlowUpSignal(e.what(), traj_in.times[j]);
      }
    } else {
      F[j] = Eigen::ArrayXcd::Zero(N);
    }
  }

  std::vector<Eigen::ArrayXcd> Du(M, Eigen::ArrayXcd::Zero(N));
  std::vector<Eigen::ArrayXcd> Dv(M, Eigen::ArrayXcd::Zero(N));
  const Eigen::ArrayXd k = mode_weights(*grid, params.sigma);
  std::vector<double> K1(M), dK1(M);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (std::size_t r = 0; r < M; ++r) {
      const auto ker = kernels(k[i], static_cast<double>(r) * h);
      K1[r] = ker.K1;
      dK1[r] = ker.dK1;
    }
    for (std::size_t a = 1; a < M; ++a) {
      // Trapezoid over tau_b = b h, b = 0..a; K1(0) = 0, dK1(0) = 1.
      std::complex<double> su = 0.5 * K1[a] * F[0][i];
      std::complex<double> sv = 0.5 * dK1[a] * F[0][i] + 0.5 * F[a][i];
      for (std::size_t b = 1; b < a; ++b) {
        su += K1[a - b] * F[b][i];
        sv += dK1[a - b] * F[b][i];
      }
      Du[a][i] = h * su;
      Dv[a][i] = h * sv;
    }
  }

  std::vector<FlowState> out;
  out.reserve(M);
  for (std::size_t a = 0; a < M; ++a) {
    out.push_back({SpectralField(grid, std::move(Du[a])), SpectralField(grid, std::move(Dv[a]))});
  }
  return out;
}

Trajectory picard_apply(const Trajectory& traj_in, const RealField& u1, const SolverConfig& config) {
  check_dense(traj_in);
  const auto D = duhamel_part(traj_in, config);
  const auto L = linear_states(transform_forward(u1), config.params, traj_in.times);
  return assemble(u1.grid, config.params, traj_in.times[1] - traj_in.times[0], traj_in.times, add(L, D));
}

PicardRun picard_iterate(const RealField& u1, const SolverConfig& config, int iterations) {
  if (iterations < 1) throw std::invalid_argument("picard_iterate: need at least one iteration");
  const GridPtr grid = u1.grid;
  Trajectory current = zero_trajectory(config, grid);
  check_dense(current);
  const auto& times = current.times;
  const double h = current.dt;
  const auto L = linear_states(transform_forward(u1), config.params, times);
  std::vector<FlowState> D_prev(times.size(), FlowState{SpectralField(grid), SpectralField(grid)});

  PicardRun run;
  // u^1 = O(0) = L, since |0|^p = 0.
  run.iterates.push_back(assemble(grid, config.params, h, times, L));
  run.distances.push_back(xt_distance(L, D_prev, times, config.params));
  for (int it = 1; it < iterations; ++it) {
    auto D = duhamel_part(run.iterates.back(), config);
    run.distances.push_back(xt_distance(D, D_prev, times, config.params));
    run.iterates.push_back(assemble(grid, config.params, h, times, add(L, D)));
    D_prev = std::move(D);
  }
  return run;
}

}  // namespace sigmalab
