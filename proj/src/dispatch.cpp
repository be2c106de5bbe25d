#include "sigmalab/config.hpp"
#include "sigmalab/multiplier.hpp"
#include "sigmalab/transform.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace sigmalab {

namespace {

using nlohmann::json;

constexpr Quantity kRated[] = {Quantity::u_l2, Quantity::dtu_l2, Quantity::hsigma_semi};

constexpr double kOracleKs[] = {0.0, 1e-3, 0.5, 0.99, 1.0 - 1e-6, 1.0, 1.0 + 1e-6, 1.01, 2.0, 10.0, 1e4};
constexpr double kOracleTs[] = {0.1, 1.0, 10.0};
constexpr double kKernelTolerance = 1e-8;
constexpr double kRieszAlphas[] = {0.25, 0.5, 0.75};
constexpr double kRieszTolerance = 0.02;

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back(name);
    return out;
  }
  void write_json(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }
  void write_field(const std::string& name, const RealField& f) {
    sigmalab::write_field(dir_ / name, f);
    files_.push_back(name);
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

json fit_report(const NormTimeSeries& series, const RunConfig& rc) {
  const FitWindow window = rc.window.value_or(default_window(rc.solver.t_end));
  json out = json::array();
  for (Quantity q : kRated) {
    json entry{{"quantity", to_string(q)}};
    try {
      const DecayFit fit = fit_decay(series, q, window);
      entry["fit"] = to_json(fit);
      entry["verdict"] = to_json(check_rate(fit, series.params, q, rc.tol));
    } catch (const std::invalid_argument& e) {
      entry["error"] = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

int run_linear_command(const RunConfig& rc, Outputs& out, json& summary) {
  const NormTimeSeries series = run_linear(rc.solver);
  if (rc.emit.contains("csv")) {
    auto f = out.open("norms.csv");
    write_series_csv(f, series);
  }
  if (rc.emit.contains("json")) {
    out.write_json("verdicts.json", {{"provenance", series.provenance}, {"label", series.label}, {"rates", fit_report(series, rc)}});
  }
  if (rc.emit.contains("fields")) {
    const RealField u1 = make_data(rc.solver);
    const FlowState last = propagate_linear(transform_forward(u1), rc.solver.params.sigma, rc.solver.t_end);
    out.write_field("u1.bin", u1);
    out.write_field("u_final.bin", transform_inverse(last.u));
    out.write_field("ut_final.bin", transform_inverse(last.ut));
  }
  summary["label"] = series.label;
  return kExitOk;
}

int run_semilinear_command(const RunConfig& rc, Outputs& out, json& summary) {
  const RealField u1 = make_data(rc.solver);
  const Trajectory traj = integrate(rc.solver, u1);
  NormTimeSeries series = to_series(traj, rc.solver);
  series.admissibility = admissibility(rc.solver.params);
  if (rc.emit.contains("csv")) {
    auto f = out.open("norms.csv");
    write_norms_csv(f, traj);
  }
  const bool blew_up = traj.termination == Termination::blow_up;
  if (rc.emit.contains("json")) {
    json j{{"provenance", series.provenance},
           {"label", series.label},
           {"termination", blew_up ? "blow_up" : "completed"},
           {"steps_taken", traj.steps_taken},
           {"admissibility", to_json(*series.admissibility)},
           {"xt_norm", xt_norm(traj, rc.solver.params).value}};
    if (blew_up) {
      j["blowup_time"] = traj.blowup_time;
      j["message"] = traj.message;
    } else {
      j["rates"] = fit_report(series, rc);
    }
    out.write_json("verdicts.json", j);
  }
  if (rc.emit.contains("fields") && traj.final_state) {
    out.write_field("u1.bin", u1);
    out.write_field("u_final.bin", transform_inverse(traj.final_state->u));
    out.write_field("ut_final.bin", transform_inverse(traj.final_state->ut));
  }
  summary["label"] = series.label;
  summary["termination"] = blew_up ? "blow_up" : "completed";
  if (blew_up) {
    std::cerr << "blow-up detected at t = " << traj.blowup_time << ": " << traj.message << '\n';
    return kExitBlowUp;
  }
  return kExitOk;
}

int run_admissible_command(const RunConfig& rc, Outputs& out, json& summary) {
  const AdmissibilityReport report = admissibility(rc.solver.params);
  out.write_json("admissibility.json", to_json(report));
  if (!rc.sweep_n.empty() && !rc.sweep_p.empty()) {
    auto f = out.open("region.csv");
    const auto& mp = rc.solver.params;
    write_region_csv(f, mp.sigma, mp.alpha, mp.m, rc.sweep_n, rc.sweep_p);
  }
  summary["overall"] = report.overall;
  std::cout << "admissible: " << (report.overall ? "true" : "false") << '\n';
  return kExitOk;
}

template <typename T>
std::vector<T> or_default(const std::vector<T>& list, T fallback) {
  return list.empty() ? std::vector<T>{fallback} : list;
}

int run_sweep_command(const RunConfig& rc, Outputs& out, json& summary) {
  const ModelParams& base = rc.solver.params;
  std::vector<ModelParams> points;
  for (int n : or_default(rc.sweep_n, base.n))
    for (double sigma : or_default(rc.sweep_sigma, base.sigma))
      for (double alpha : or_default(rc.sweep_alpha, base.alpha))
        for (double p : or_default(rc.sweep_p, base.p))
          for (double m : or_default(rc.sweep_m, base.m)) points.push_back({n, sigma, alpha, p, m});

  SweepOptions options;
  options.mode = rc.sweep_mode;
  options.tol = rc.tol;
  options.window = rc.window;
  options.threads = rc.threads;
  SolverConfig solver = rc.solver;
  if (rc.auto_length) {
    // Every sigma in the grid must keep t_end inside its horizon.
    double length = 0.0;
    for (const auto& pt : points) length = std::max(length, suggested_box_length(solver.t_end, pt.sigma));
    solver.grid.length = length;
  }
  const auto rows = sweep(points, solver, options);
  if (rc.emit.contains("csv")) {
    auto f = out.open("sweep.csv");
    write_sweep_csv(f, rows);
  }
  if (rc.emit.contains("json")) {
    json j = json::array();
    for (const auto& r : rows) {
      json row{{"n", r.params.n},   {"sigma", r.params.sigma}, {"alpha", r.params.alpha},
               {"p", r.params.p},   {"m", r.params.m},         {"label", r.label}};
      if (!r.error.empty()) row["error"] = r.error;
      json rates = json::array();
      for (std::size_t q = 0; q < r.fits.size(); ++q) {
        rates.push_back({{"fit", to_json(r.fits[q])}, {"verdict", to_json(r.verdicts[q])}});
      }
      row["rates"] = rates;
      if (r.admissibility) row["admissibility"] = to_json(*r.admissibility);
      j.push_back(std::move(row));
    }
    out.write_json("sweep.json", j);
  }
  summary["points"] = rows.size();
  return kExitOk;
}

int run_oracle_command(const RunConfig&, Outputs& out, json& summary) {
  bool all_pass = true;
  json kernel_rows = json::array();
  double kernel_worst = 0.0;
  for (double k : kOracleKs) {
    for (double t : kOracleTs) {
      const double err = kernel_oracle_error(k, t);
      kernel_worst = std::max(kernel_worst, err);
      kernel_rows.push_back({{"k", k}, {"t", t}, {"error", err}, {"pass", err <= kKernelTolerance}});
    }
  }
  const bool kernels_pass = kernel_worst <= kKernelTolerance;
  all_pass = all_pass && kernels_pass;

  json riesz_rows = json::array();
  const GridPtr grid = build_grid(GridSpec{1, 4096, 200.0});
  const Eigen::ArrayXd x = grid->axis_coordinates();
  const RealField f(grid, (-0.5 * x.square()).exp());
  for (double alpha : kRieszAlphas) {
    const double err = central_discrepancy(riesz_potential(f, alpha), riesz_oracle(f, alpha));
    const bool pass = err <= kRieszTolerance;
    all_pass = all_pass && pass;
    riesz_rows.push_back({{"alpha", alpha}, {"discrepancy", err}, {"pass", pass}});
  }

  out.write_json("oracle.json", {{"kernels", {{"tolerance", kKernelTolerance}, {"max_error", kernel_worst},
                                               {"pass", kernels_pass}, {"samples", kernel_rows}}},
                                 {"riesz", {{"tolerance", kRieszTolerance}, {"samples", riesz_rows}}},
                                 {"pass", all_pass}});
  std::cout << "kernel max error " << kernel_worst << (kernels_pass ? " PASS" : " FAIL") << '\n';
  for (const auto& r : riesz_rows) {
    std::cout << "riesz alpha=" << r["alpha"].get<double>() << " discrepancy " << r["discrepancy"].get<double>()
              << (r["pass"].get<bool>() ? " PASS" : " FAIL") << '\n';
  }
  summary["pass"] = all_pass;
  return all_pass ? kExitOk : kExitInternalError;
}

std::string versions_eigen() {
  return std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION);
}

}  // namespace

int dispatch(const RunConfig& rc) {
  const auto start = std::chrono::steady_clock::now();
  Outputs out(rc.output_dir);
  json summary = json::object();
  int status = kExitInternalError;
  std::string error;
  try {
    switch (rc.subcommand) {
      case Subcommand::linear: status = run_linear_command(rc, out, summary); break;
      case Subcommand::semilinear: status = run_semilinear_command(rc, out, summary); break;
      case Subcommand::admissible: status = run_admissible_command(rc, out, summary); break;
      case Subcommand::sweep: status = run_sweep_command(rc, out, summary); break;
      case Subcommand::oracle_test: status = run_oracle_command(rc, out, summary); break;
    }
  } catch (const BlowUpSignal& e) {
    status = kExitBlowUp;
    error = e.what();
  } catch (const std::invalid_argument& e) {
    status = kExitValidationError;
    error = e.what();
  } catch (const std::exception& e) {
    status = kExitInternalError;
    error = e.what();
  }
  if (!error.empty()) std::cerr << "error: " << error << '\n';
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest{{"subcommand", to_string(rc.subcommand)},
                {"config", rc.effective},
                {"config_hash", rc.hash()},
                {"versions",
                 {{"eigen", versions_eigen()}, {"fftw", std::string(fftw_version)}, {"boost", BOOST_LIB_VERSION},
                  {"compiler", __VERSION__}}},
                {"wall_time_seconds", wall},
                {"outputs", out.files()},
                {"exit_status", status},
                {"summary", summary}};
  if (!error.empty()) manifest["error"] = error;
  std::ofstream(out.dir() / "manifest.json") << manifest.dump(2) << '\n';
  return status;
}

}  // namespace sigmalab
