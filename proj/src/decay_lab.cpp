#include "sigmalab/decay_lab.hpp"

#include "sigmalab/norms.hpp"
#include "sigmalab/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <sstream>
#include <thread>

namespace sigmalab {

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::u_l2: return "u_L2";
    case Quantity::dtu_l2: return "dtu_L2";
    case Quantity::hsigma_semi: return "Hsigma_semi";
    case Quantity::u_lm: return "u_Lm";
  }
  return "unknown";
}

Quantity parse_quantity(const std::string& name) {
  if (name == "u_L2" || name == "L2") return Quantity::u_l2;
  if (name == "dtu_L2" || name == "dtL2") return Quantity::dtu_l2;
  if (name == "Hsigma_semi" || name == "Hsigma") return Quantity::hsigma_semi;
  if (name == "u_Lm" || name == "Lm") return Quantity::u_lm;
  throw std::invalid_argument("unknown quantity '" + name + "'");
}

const std::vector<double>& NormTimeSeries::values(Quantity q) const {
  switch (q) {
    case Quantity::u_l2: return l2;
    case Quantity::dtu_l2: return dt_l2;
    case Quantity::hsigma_semi: return hsigma;
    case Quantity::u_lm: return lm;
  }
  throw std::invalid_argument("unknown quantity");
}

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string canonical_string(const SolverConfig& c) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "n=" << c.params.n << ";sigma=" << c.params.sigma << ";alpha=" << c.params.alpha << ";p=" << c.params.p
    << ";m=" << c.params.m << ";N=" << c.grid.points << ";L=" << c.grid.length << ";dt=" << c.dt
    << ";t_end=" << c.t_end << ";dealias=" << c.dealias << ";epsilon=" << c.amplitude
    << ";profile=" << to_string(c.profile) << ";mean_zero=" << c.mean_zero << ";seed=" << c.seed
    << ";nonlinear=" << c.nonlinear << ";sample_interval=" << c.sample_interval;
  return s.str();
}

NormTimeSeries run_linear(const SolverConfig& config) {
  validate(config);
  const double horizon = box_horizon(config.grid.length, config.params.sigma);
  if (config.t_end > horizon * (1.0 + 1e-12)) {
    throw std::invalid_argument("t_end = " + std::to_string(config.t_end) + " exceeds the box-validity horizon " +
                                std::to_string(horizon));
  }
  const RealField u1 = make_data(config);
  const SpectralField U1 = transform_forward(u1);
  const double interval = config.sample_interval > 0.0 ? config.sample_interval : config.dt;
  const auto samples = static_cast<std::size_t>(std::ceil(config.t_end / interval - 1e-9));
  const double step = config.t_end / static_cast<double>(samples);

  NormTimeSeries out;
  out.params = config.params;
  out.grid = config.grid;
  out.provenance = fingerprint("linear;" + canonical_string(config));
  out.label = "linear";
  for (std::size_t s = 0; s <= samples; ++s) {
    const double t = static_cast<double>(s) * step;
    const NormRecord r = measure(propagate_linear(U1, config.params.sigma, t), config.params, t);
    out.times.push_back(t);
    out.l2.push_back(r.l2);
    out.dt_l2.push_back(r.dt_l2);
    out.hsigma.push_back(r.hsigma);
    out.lm.push_back(r.lm);
  }
  return out;
}

NormTimeSeries to_series(const Trajectory& traj, const SolverConfig& config) {
  NormTimeSeries out;
  out.params = traj.params;
  out.grid = config.grid;
  out.provenance = fingerprint("semilinear;" + canonical_string(config));
  for (const auto& r : traj.norms) {
    out.times.push_back(r.t);
    out.l2.push_back(r.l2);
    out.dt_l2.push_back(r.dt_l2);
    out.hsigma.push_back(r.hsigma);
    out.lm.push_back(r.lm);
  }
  if (traj.termination == Termination::blow_up) {
    out.label = "growth-detected";
  } else {
    const double peak = out.l2.empty() ? 0.0 : *std::max_element(out.l2.begin(), out.l2.end());
    out.label = (out.l2.empty() || out.l2.back() <= peak) ? "decayed" : "growth-detected";
  }
  return out;
}

NormTimeSeries run_semilinear(const SolverConfig& config) {
  auto series = to_series(integrate(config), config);
  series.admissibility = admissibility(config.params);
  return series;
}

FitWindow default_window(double t_end) { return {std::max(1.0, 0.1 * t_end), t_end}; }

DecayFit fit_decay(const NormTimeSeries& series, Quantity quantity, FitWindow window) {
  if (!(window.lo >= 1.0)) throw std::invalid_argument("fit window must start at t >= 1");
  if (!(window.hi > window.lo)) throw std::invalid_argument("fit window is empty");
  const auto& y = series.values(quantity);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < window.lo - 1e-9 || t > window.hi + 1e-9) continue;
    if (!(y[i] > 0.0)) throw std::invalid_argument("zero norm at t = " + std::to_string(t) + " in fit window");
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(y[i]));
  }
  if (xs.size() < kMinFitSamples) {
    throw std::invalid_argument("fit window holds " + std::to_string(xs.size()) + " samples, need " +
                                std::to_string(kMinFitSamples));
  }
  const Eigen::Map<const Eigen::ArrayXd> X(xs.data(), static_cast<Eigen::Index>(xs.size()));
  const Eigen::Map<const Eigen::ArrayXd> Y(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const double n = static_cast<double>(xs.size());
  const double mx = X.mean();
  const double my = Y.mean();
  const double sxx = (X - mx).square().sum();
  const double sxy = ((X - mx) * (Y - my)).sum();
  const double syy = (Y - my).square().sum();

  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double sse = (Y - fit.intercept - fit.slope * X).square().sum();
  fit.stderr_slope = std::sqrt(std::max(0.0, sse / (n - 2.0)) / sxx);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.window = window;
  fit.samples = xs.size();
  return fit;
}

RateVerdict check_rate(const DecayFit& fit, const ModelParams& params, Quantity quantity, double tol) {
  RateVerdict v;
  v.quantity = quantity;
  v.slope = fit.slope;
  v.tol = tol;
  switch (quantity) {
    case Quantity::u_l2: v.theory = decay_exponent(params, 0.0, 0); break;
    case Quantity::dtu_l2: v.theory = decay_exponent(params, 0.0, 1); break;
    case Quantity::hsigma_semi: v.theory = decay_exponent(params, params.sigma, 0); break;
    default: throw std::invalid_argument("check_rate: no estimate for quantity " + to_string(quantity));
  }
  v.pass = fit.slope <= v.theory + tol;
  v.sharp = std::abs(fit.slope - v.theory) <= tol;
  return v;
}

nlohmann::json to_json(const DecayFit& f) {
  return {{"slope", f.slope},         {"intercept", f.intercept},   {"stderr", f.stderr_slope},
          {"t_lo", f.window.lo},      {"t_hi", f.window.hi},        {"r_squared", f.r_squared},
          {"samples", f.samples}};
}

nlohmann::json to_json(const RateVerdict& v) {
  return {{"quantity", to_string(v.quantity)}, {"slope", v.slope}, {"theory", v.theory},
          {"tol", v.tol},                      {"pass", v.pass},   {"sharp", v.sharp}};
}

namespace {

constexpr Quantity kRated[] = {Quantity::u_l2, Quantity::dtu_l2, Quantity::hsigma_semi};

SweepRow run_row(const ModelParams& params, const SolverConfig& base, const SweepOptions& options) {
  SweepRow row;
  row.params = params;
  try {
    row.admissibility = admissibility(params);
    SolverConfig config = base;
    config.params = params;
    config.grid.dim = params.n;
    const NormTimeSeries series =
        options.mode == SweepMode::linear ? run_linear(config) : run_semilinear(config);
    row.label = series.label;
    const FitWindow window = options.window.value_or(default_window(config.t_end));
    for (Quantity q : kRated) {
      row.fits.push_back(fit_decay(series, q, window));
      row.verdicts.push_back(check_rate(row.fits.back(), params, q, options.tol));
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    if (row.label.empty()) row.label = "error";
  }
  return row;
}

auto row_key(const ModelParams& p) { return std::make_tuple(p.n, p.sigma, p.alpha, p.p, p.m); }

}  // namespace

std::vector<SweepRow> sweep(std::span<const ModelParams> points, const SolverConfig& base,
                            const SweepOptions& options) {
  std::vector<SweepRow> rows(points.size());
  const unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < points.size()) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t begin = next;
    for (; next < points.size() && next - begin < threads; ++next) {
      batch.push_back(std::async(std::launch::async, run_row, points[next], std::cref(base), std::cref(options)));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) rows[begin + i] = batch[i].get();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return row_key(a.params) < row_key(b.params); });
  return rows;
}

void write_series_csv(std::ostream& out, const NormTimeSeries& s) {
  out << "t,L2,dtL2,Hsigma,Lm\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << s.times[i] << ',' << s.l2[i] << ',' << s.dt_l2[i] << ',' << s.hsigma[i] << ',' << s.lm[i] << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,sigma,alpha,p,m,label,slope_L2,stderr_L2,slope_dtL2,stderr_dtL2,slope_Hsigma,stderr_Hsigma,"
         "pass_L2,sharp_L2,pass_dtL2,sharp_dtL2,pass_Hsigma,sharp_Hsigma,p_crit,lower_14_ok,upper_14_ok,"
         "cond_15_ok,theta_s2_ok,theta_sm_ok,riesz_q_s2_ok,riesz_q_sm_ok,admissible,error\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.params.n << ',' << r.params.sigma << ',' << r.params.alpha << ',' << r.params.p << ',' << r.params.m
        << ',' << r.label;
    for (std::size_t q = 0; q < 3; ++q) {
      if (q < r.fits.size()) {
        out << ',' << r.fits[q].slope << ',' << r.fits[q].stderr_slope;
      } else {
        out << ",,";
      }
    }
    for (std::size_t q = 0; q < 3; ++q) {
      if (q < r.verdicts.size()) {
        out << ',' << r.verdicts[q].pass << ',' << r.verdicts[q].sharp;
      } else {
        out << ",,";
      }
    }
    if (r.admissibility) {
      const auto& a = *r.admissibility;
      out << ',' << a.p_crit << ',' << a.lower_14.holds << ',' << a.upper_14.holds << ',' << a.cond_15.holds << ','
          << a.gn_theta_s2.in_range << ',' << a.gn_theta_sm.in_range << ',' << a.riesz_q_s2.in_range << ','
          << a.riesz_q_sm.in_range << ',' << a.overall;
    } else {
      out << ",,,,,,,,,";
    }
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << ',' << err << '\n';
  }
}

}  // namespace sigmalab
