#include "sigmalab/config.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace sigmalab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sigmalab_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("key-value documents") {
  const auto kv = parse_key_values("# comment\n a = 1 \n\nb=two # trailing\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "two");
  CHECK_THROWS_AS(parse_key_values("no equals sign"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("a=1\na=2"), ConfigError);
}

TEST_CASE("defaults fill a minimal file") {
  const RunConfig rc = parse_config_text("subcommand=linear\nn=1\nsigma=1\nm=1\n");
  CHECK(rc.subcommand == Subcommand::linear);
  CHECK(rc.solver.grid.points == 8192);
  CHECK(rc.auto_length);
  CHECK(rc.solver.t_end == 200.0);
  CHECK(rc.solver.grid.length == doctest::Approx(suggested_box_length(200.0, 1.0)));
  CHECK(rc.solver.seed == 0);
  CHECK(rc.effective.at("N") == "8192");
  CHECK(rc.emit == std::set<std::string>{"csv", "json"});
  for (const auto& [key, value] : config_schema()) CHECK(rc.effective.contains(key));
}

TEST_CASE("flags override the file") {
  const RunConfig rc = parse_config_text("subcommand=linear\np=3\n", {{"p", "4"}});
  CHECK(rc.solver.params.p == 4.0);
}

TEST_CASE("alpha out of range names the key and the range") {
  try {
    parse_config_text("subcommand=linear\nalpha=2\nn=1\n");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "alpha");
    const std::string msg = e.what();
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(msg.find("(0, n)") != std::string::npos);
  }
}

TEST_CASE("invalid configurations") {
  auto key_of = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("accepted");
  };
  CHECK(key_of("subcommand=linear\nbogus=1\n") == "bogus");
  CHECK(key_of("subcommand=linear\nN=1000\n") == "N");
  CHECK(key_of("subcommand=linear\ndt=abc\n") == "dt");
  CHECK(key_of("subcommand=linear\ndt=0.7\n") == "dt");
  CHECK(key_of("subcommand=linear\nmean_zero=maybe\n") == "mean_zero");
  CHECK(key_of("subcommand=linear\nprofile=square\n") == "profile");
  CHECK(key_of("subcommand=linear\nL=100\nt_end=200\n") == "t_end");
  CHECK(key_of("subcommand=linear\nm=3\n") == "m");
  CHECK(key_of("subcommand=launch\n") == "subcommand");
  CHECK(key_of("n=1\n") == "subcommand");
  CHECK(key_of("subcommand=admissible\nL=100\nt_end=200\n") == "accepted");
  CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/sigmalab.cfg")), ConfigError);
}

TEST_CASE("config hash tracks effective values") {
  const RunConfig a = parse_config_text("subcommand=linear\n");
  const RunConfig same = parse_config_text("subcommand = linear\np = 4.0\n");
  const RunConfig other = parse_config_text("subcommand=linear\np=4.5\n");
  CHECK(a.hash() == same.hash());
  CHECK(a.hash() != other.hash());
  const RunConfig explicit_length =
      parse_config_text("subcommand=linear\nL=" + a.effective.at("L") + "\n");
  CHECK(explicit_length.hash() == a.hash());
}

TEST_CASE("linear runs are byte-identical") {
  const fs::path d1 = scratch("lin1");
  const fs::path d2 = scratch("lin2");
  const std::string text = "subcommand=linear\nN=1024\nt_end=30\nprofile=noise_bandlimited\nseed=9\n";
  CHECK(dispatch(parse_config_text(text, {{"output_dir", d1.string()}})) == kExitOk);
  CHECK(dispatch(parse_config_text(text, {{"output_dir", d2.string()}})) == kExitOk);
  CHECK(slurp(d1 / "norms.csv") == slurp(d2 / "norms.csv"));
  CHECK(fs::exists(d1 / "verdicts.json"));

  const auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest["exit_status"] == 0);
  CHECK(manifest["config"]["seed"] == "9");
  CHECK(manifest["outputs"].size() == 2);
  CHECK(manifest.contains("wall_time_seconds"));
  CHECK(manifest["versions"].contains("fftw"));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("admissible subcommand reports the reference point") {
  const fs::path d = scratch("adm");
  const RunConfig rc =
      parse_config_text("subcommand=admissible\nn=1\nsigma=1\nalpha=0.5\nm=1\np=4\nsweep_n=1,2,3\nsweep_p=2,4\n",
                        {{"output_dir", d.string()}});
  CHECK(dispatch(rc) == kExitOk);
  const auto report = nlohmann::json::parse(slurp(d / "admissibility.json"));
  CHECK(report["overall"] == true);
  CHECK(fs::exists(d / "region.csv"));
}

TEST_CASE("blow-up exits with status 3") {
  const fs::path d = scratch("blow");
  const RunConfig rc = parse_config_text("subcommand=semilinear\nN=1024\nt_end=50\np=1.5\nepsilon=50\n",
                                         {{"output_dir", d.string()}});
  CHECK(dispatch(rc) == kExitBlowUp);
  const auto verdicts = nlohmann::json::parse(slurp(d / "verdicts.json"));
  CHECK(verdicts["termination"] == "blow_up");
}

TEST_CASE("fields are written in the binary layout") {
  const fs::path d = scratch("fields");
  const RunConfig rc =
      parse_config_text("subcommand=semilinear\nN=512\nt_end=10\nemit=fields\n", {{"output_dir", d.string()}});
  CHECK(dispatch(rc) == kExitOk);
  const RealField u = read_field(d / "u_final.bin");
  CHECK(u.grid->points() == 512);
  CHECK(!fs::exists(d / "norms.csv"));
}

TEST_CASE("sweep subcommand writes one row per point") {
  const fs::path d = scratch("sweep");
  const RunConfig rc = parse_config_text("subcommand=sweep\nN=1024\nt_end=40\nsweep_p=3,4\nsweep_m=1,2\n",
                                         {{"output_dir", d.string()}});
  CHECK(dispatch(rc) == kExitOk);
  const auto rows = nlohmann::json::parse(slurp(d / "sweep.json"));
  CHECK(rows.size() == 4);
}

TEST_CASE("outputs stay inside the output directory") {
  const fs::path parent = scratch("contain");
  const fs::path d = parent / "out";
  fs::create_directories(parent);
  CHECK(dispatch(parse_config_text("subcommand=linear\nN=512\nt_end=10\n", {{"output_dir", d.string()}})) == kExitOk);
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(parent)) ++entries;
  CHECK(entries == 1);
}
