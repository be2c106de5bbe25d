#include "sigmalab/config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

// Turns the leftover `--key=value` / `--key value` arguments into overrides.
sigmalab::Overrides collect_overrides(const std::vector<std::string>& extras) {
  sigmalab::Overrides out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
      throw sigmalab::ConfigError(arg, "unexpected argument (overrides take the form --key=value)");
    }
    const std::string body = arg.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      out.emplace_back(body.substr(0, eq), body.substr(eq + 1));
    } else if (i + 1 < extras.size() && extras[i + 1].rfind("--", 0) != 0) {
      out.emplace_back(body, extras[++i]);
    } else {
      throw sigmalab::ConfigError(body, "missing value");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral damped sigma-evolution simulator"};
  app.allow_extras();
  app.footer("usage: sigmalab <linear|semilinear|admissible|sweep|oracle-test> [--config FILE] [--key=value ...]");
  std::string config_path;
  app.add_option("-c,--config", config_path, "flat key = value configuration file");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sigmalab::kExitValidationError;
  }

  try {
    sigmalab::Overrides overrides;
    if (const char* env = std::getenv(sigmalab::kOutputDirEnv); env && *env) overrides.emplace_back("output_dir", env);
    std::vector<std::string> extras = app.remaining();
    if (!extras.empty() && extras.front().rfind("--", 0) != 0) {
      overrides.emplace_back("subcommand", extras.front());
      extras.erase(extras.begin());
    }
    for (auto& kv : collect_overrides(extras)) overrides.push_back(std::move(kv));
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) file = config_path;
    const sigmalab::RunConfig config = sigmalab::parse_config(file, overrides);
    return sigmalab::dispatch(config);
  } catch (const sigmalab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return sigmalab::kExitValidationError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return sigmalab::kExitInternalError;
  }
}
