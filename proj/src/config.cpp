#include "sigmalab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sigmalab {

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::linear: return "linear";
    case Subcommand::semilinear: return "semilinear";
    case Subcommand::admissible: return "admissible";
    case Subcommand::sweep: return "sweep";
    case Subcommand::oracle_test: return "oracle-test";
  }
  return "unknown";
}

std::string RunConfig::hash() const {
  std::string text;
  for (const auto& [k, v] : effective) text += k + "=" + v + "\n";
  return fingerprint(text);
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string canonical(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    throw ConfigError(key, "expected a finite real number, got '" + value + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) throw ConfigError(key, "expected an integer, got '" + value + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream s(value);
  std::string item;
  while (std::getline(s, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Subcommand to_subcommand(const std::string& value) {
  if (value == "linear") return Subcommand::linear;
  if (value == "semilinear") return Subcommand::semilinear;
  if (value == "admissible") return Subcommand::admissible;
  if (value == "sweep") return Subcommand::sweep;
  if (value == "oracle-test") return Subcommand::oracle_test;
  throw ConfigError("subcommand", "unknown subcommand '" + value +
                                      "' (expected linear, semilinear, admissible, sweep or oracle-test)");
}

// Re-raise validation failures of the model layer under the key they concern.
template <typename F>
void with_key(const std::string& key, F&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& config_schema() {
  static const std::vector<std::pair<std::string, std::string>> schema = {
      {"subcommand", ""},
      {"n", "1"},
      {"sigma", "1"},
      {"alpha", "0.5"},
      {"p", "4"},
      {"m", "1"},
      {"N", "8192"},
      {"L", "auto"},
      {"dt", "0.1"},
      {"t_end", "200"},
      {"epsilon", "0.01"},
      {"profile", "gaussian"},
      {"mean_zero", "false"},
      {"dealias", "true"},
      {"nonlinear", "true"},
      {"seed", "0"},
      {"sample_interval", "0"},
      {"output_dir", "sigmalab_out"},
      {"emit", "csv,json"},
      {"tol", "0.05"},
      {"fit_lo", "auto"},
      {"fit_hi", "auto"},
      {"sweep_n", ""},
      {"sweep_sigma", ""},
      {"sweep_alpha", ""},
      {"sweep_p", ""},
      {"sweep_m", ""},
      {"sweep_mode", "linear"},
      {"threads", "0"},
  };
  return schema;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + body + "'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "missing key");
    if (out.contains(key)) throw ConfigError(key, "key given twice");
    out[key] = value;
  }
  return out;
}

RunConfig parse_config_text(const std::string& text, const Overrides& overrides) {
  std::map<std::string, std::string> kv;
  for (const auto& [k, v] : config_schema()) kv[k] = v;
  auto assign = [&](const std::string& key, const std::string& value) {
    if (!kv.contains(key)) throw ConfigError(key, "unknown configuration key");
    kv[key] = value;
  };
  for (const auto& [k, v] : parse_key_values(text)) assign(k, v);
  for (const auto& [k, v] : overrides) assign(k, v);

  RunConfig rc;
  if (kv["subcommand"].empty()) throw ConfigError("subcommand", "no subcommand given");
  rc.subcommand = to_subcommand(kv["subcommand"]);

  SolverConfig& sc = rc.solver;
  ModelParams& mp = sc.params;
  mp.n = static_cast<int>(to_integer("n", kv["n"]));
  mp.sigma = to_double("sigma", kv["sigma"]);
  mp.alpha = to_double("alpha", kv["alpha"]);
  mp.p = to_double("p", kv["p"]);
  mp.m = to_double("m", kv["m"]);
  if (mp.n < 1 || mp.n > 3) throw ConfigError("n", "must be 1, 2 or 3");
  if (!(mp.sigma >= 1.0)) throw ConfigError("sigma", "must be >= 1");
  if (!(mp.alpha > 0.0 && mp.alpha < mp.n)) {
    throw ConfigError("alpha", "must lie in (0, n) = (0, " + std::to_string(mp.n) + "), got " + kv["alpha"]);
  }
  if (!(mp.p > 1.0)) throw ConfigError("p", "must be > 1");
  if (!(mp.m >= 1.0 && mp.m <= 2.0)) throw ConfigError("m", "must lie in [1, 2]");

  sc.t_end = to_double("t_end", kv["t_end"]);
  sc.dt = to_double("dt", kv["dt"]);
  if (!(sc.dt > 0.0 && sc.dt <= 0.5)) throw ConfigError("dt", "must lie in (0, 0.5]");
  if (!(sc.t_end >= sc.dt)) throw ConfigError("t_end", "must be >= dt");

  sc.grid.dim = mp.n;
  sc.grid.points = static_cast<int>(to_integer("N", kv["N"]));
  with_key("N", [&] { validate(GridSpec{mp.n, sc.grid.points, 1.0}); });
  rc.auto_length = kv["L"] == "auto";
  sc.grid.length = rc.auto_length ? suggested_box_length(sc.t_end, mp.sigma) : to_double("L", kv["L"]);
  if (!(sc.grid.length > 0.0)) throw ConfigError("L", "must be positive");

  sc.amplitude = to_double("epsilon", kv["epsilon"]);
  if (!(sc.amplitude >= 0.0)) throw ConfigError("epsilon", "must be >= 0");
  with_key("profile", [&] { sc.profile = parse_profile(kv["profile"]); });
  sc.mean_zero = to_bool("mean_zero", kv["mean_zero"]);
  sc.dealias = to_bool("dealias", kv["dealias"]);
  sc.nonlinear = to_bool("nonlinear", kv["nonlinear"]);
  const long long seed = to_integer("seed", kv["seed"]);
  sc.seed = static_cast<std::uint64_t>(seed);
  sc.sample_interval = to_double("sample_interval", kv["sample_interval"]);
  if (!(sc.sample_interval >= 0.0)) throw ConfigError("sample_interval", "must be >= 0");

  if (rc.subcommand == Subcommand::linear || rc.subcommand == Subcommand::semilinear) {
    const double horizon = box_horizon(sc.grid.length, mp.sigma);
    if (sc.t_end > horizon * (1.0 + 1e-12)) {
      throw ConfigError("t_end", "exceeds the box-validity horizon " + canonical(horizon) + " for L = " +
                                     canonical(sc.grid.length));
    }
  }

  rc.output_dir = kv["output_dir"];
  if (rc.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  rc.emit.clear();
  for (const auto& e : split_list(kv["emit"])) {
    if (e != "csv" && e != "json" && e != "fields") throw ConfigError("emit", "unknown output kind '" + e + "'");
    rc.emit.insert(e);
  }

  rc.tol = to_double("tol", kv["tol"]);
  if (!(rc.tol >= 0.0)) throw ConfigError("tol", "must be >= 0");
  if (kv["fit_lo"] != "auto" || kv["fit_hi"] != "auto") {
    FitWindow w = default_window(sc.t_end);
    if (kv["fit_lo"] != "auto") w.lo = to_double("fit_lo", kv["fit_lo"]);
    if (kv["fit_hi"] != "auto") w.hi = to_double("fit_hi", kv["fit_hi"]);
    if (!(w.lo >= 1.0)) throw ConfigError("fit_lo", "must be >= 1");
    if (!(w.hi > w.lo)) throw ConfigError("fit_hi", "must exceed fit_lo");
    rc.window = w;
  }

  for (const auto& s : split_list(kv["sweep_n"])) rc.sweep_n.push_back(static_cast<int>(to_integer("sweep_n", s)));
  for (const auto& s : split_list(kv["sweep_sigma"])) rc.sweep_sigma.push_back(to_double("sweep_sigma", s));
  for (const auto& s : split_list(kv["sweep_alpha"])) rc.sweep_alpha.push_back(to_double("sweep_alpha", s));
  for (const auto& s : split_list(kv["sweep_p"])) rc.sweep_p.push_back(to_double("sweep_p", s));
  for (const auto& s : split_list(kv["sweep_m"])) rc.sweep_m.push_back(to_double("sweep_m", s));
  if (kv["sweep_mode"] == "linear") {
    rc.sweep_mode = SweepMode::linear;
  } else if (kv["sweep_mode"] == "semilinear") {
    rc.sweep_mode = SweepMode::semilinear;
  } else {
    throw ConfigError("sweep_mode", "must be linear or semilinear");
  }
  const long long threads = to_integer("threads", kv["threads"]);
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  rc.threads = static_cast<unsigned>(threads);

  // Canonical echo of every effective value.
  rc.effective = kv;
  rc.effective["subcommand"] = to_string(rc.subcommand);
  rc.effective["n"] = std::to_string(mp.n);
  rc.effective["sigma"] = canonical(mp.sigma);
  rc.effective["alpha"] = canonical(mp.alpha);
  rc.effective["p"] = canonical(mp.p);
  rc.effective["m"] = canonical(mp.m);
  rc.effective["N"] = std::to_string(sc.grid.points);
  rc.effective["L"] = canonical(sc.grid.length);
  rc.effective["dt"] = canonical(sc.dt);
  rc.effective["t_end"] = canonical(sc.t_end);
  rc.effective["epsilon"] = canonical(sc.amplitude);
  rc.effective["profile"] = to_string(sc.profile);
  rc.effective["mean_zero"] = sc.mean_zero ? "true" : "false";
  rc.effective["dealias"] = sc.dealias ? "true" : "false";
  rc.effective["nonlinear"] = sc.nonlinear ? "true" : "false";
  rc.effective["seed"] = std::to_string(sc.seed);
  rc.effective["sample_interval"] = canonical(sc.sample_interval);
  rc.effective["tol"] = canonical(rc.tol);
  rc.effective["threads"] = std::to_string(rc.threads);
  {
    std::string emit;
    for (const auto& e : rc.emit) emit += (emit.empty() ? "" : ",") + e;
    rc.effective["emit"] = emit;
  }
  if (rc.window) {
    rc.effective["fit_lo"] = canonical(rc.window->lo);
    rc.effective["fit_hi"] = canonical(rc.window->hi);
  }
  return rc;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& overrides) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("config", "cannot open config file '" + file->string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  return parse_config_text(text, overrides);
}

}  // namespace sigmalab
