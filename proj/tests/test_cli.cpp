#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <vector>

#include "llbcs/cli_commands.hpp"
#include "llbcs/csv.hpp"

using namespace llbcs;
namespace fs = std::filesystem;

namespace {

fs::path repo_config(const char* name) {
  // Tests run from the build tree; configs live next to the sources.
  for (fs::path dir = fs::current_path(); !dir.empty(); dir = dir.parent_path()) {
    const fs::path candidate = dir / "configs" / name;
    if (fs::exists(candidate)) return candidate;
    if (dir == dir.root_path()) break;
  }
  return fs::path("configs") / name;
}

std::vector<double> read_series_values(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> values;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("overrides land on the right config fields") {
  CliOverrides o;
  o.seed = 99;
  o.trials = 12;
  o.methods = std::vector<std::string>{"l1", "bcs"};
  o.sinr_db = -3.5;
  o.sgnr_db = 15.0;
  o.workers = 2;
  const ExperimentConfig cfg = resolve_config(o);
  CHECK(cfg.run.base_seed == 99);
  CHECK(cfg.run.trials == 12);
  CHECK(cfg.run.methods == std::vector<Method>{Method::L1, Method::Bcs});
  CHECK(cfg.noise.sinr_db == -3.5);
  CHECK(cfg.noise.sgnr_db == 15.0);
  CHECK(cfg.run.workers == 2);

  CliOverrides bad;
  bad.methods = std::vector<std::string>{"matched-filter"};
  CHECK_THROWS(resolve_config(bad));
}

TEST_CASE("simulate writes the full artifact set deterministically") {
  const fs::path out = fs::temp_directory_path() / "llbcs_cli_test";
  fs::remove_all(out);

  CliOverrides o;
  o.config_path = repo_config("reference.json").string();
  o.seed = 42;
  o.sinr_db = -10.0;
  o.out_dir = out.string();
  REQUIRE(cmd_simulate(o) == 0);

  const fs::path dir = out / "simulate-seed42";
  for (const char* f :
       {"waveform.csv", "channel.csv", "received.csv", "noise.csv",
        "summary.json", "resolved_config.json", "spectrum_ll-bcs.csv",
        "spectrum_l-bcs.csv", "spectrum_bcs.csv", "spectrum_l1.csv"})
    CHECK(fs::exists(dir / f));

  const auto summary =
      nlohmann::json::parse(read_text_file(dir / "summary.json"));
  CHECK(summary.at("true_delays_s").size() == 4);
  for (const char* m : {"ll-bcs", "l-bcs", "bcs", "l1"})
    CHECK(summary.at("methods").at(m).at("est_delays_s").size() == 4);

  // Strong impulses dominate the received trace.
  const std::vector<double> received = read_series_values(dir / "received.csv");
  std::vector<double> mags;
  for (double v : received) mags.push_back(std::abs(v));
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak = *std::max_element(mags.begin(), mags.end());
  CHECK(peak / median > 10.0);

  // Byte-identical on re-run.
  const std::string before = read_text_file(dir / "summary.json") +
                             read_text_file(dir / "received.csv") +
                             read_text_file(dir / "spectrum_ll-bcs.csv");
  REQUIRE(cmd_simulate(o) == 0);
  const std::string after = read_text_file(dir / "summary.json") +
                            read_text_file(dir / "received.csv") +
                            read_text_file(dir / "spectrum_ll-bcs.csv");
  CHECK(before == after);
  fs::remove_all(out);
}

TEST_CASE("validate reports derived sizes for the shipped config") {
  CliOverrides o;
  o.config_path = repo_config("reference.json").string();
  CHECK(cmd_validate(o) == 0);

  CliOverrides missing;
  missing.config_path = "/nonexistent/config.json";
  CHECK_THROWS_AS(resolve_config(missing), ConfigError);
}

TEST_SUITE_END();
