#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "sltl/config.hpp"
#include "sltl/dispersion.hpp"

using namespace sltl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args, const fs::path& capture) {
  const std::string cmd = std::string(SLTL_CLI_PATH) + " " + args + " > " + capture.string() +
                          " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("paper defaults validate and expose the reference frequencies") {
  const RunConfig config = RunConfig::paper_defaults();
  config.validate();
  CHECK(config.superlattice.resonance() == doctest::Approx(9.12870929175277e10).epsilon(1e-12));
  CHECK(config.right_handed.resonance() == doctest::Approx(7.30296743340221e10).epsilon(1e-12));
  CHECK(config.superlattice.nominal_impedance() == doctest::Approx(54.7722557505166));
  CHECK(config.right_handed.impedance() == doctest::Approx(54.7722557505166));
}

TEST_CASE("config json round trip is idempotent") {
  const RunConfig config = RunConfig::paper_defaults();
  const json once = config.to_json();
  const RunConfig reloaded = RunConfig::from_json(once);
  const json twice = reloaded.to_json();
  CHECK(once.dump(2) == twice.dump(2));
}

TEST_CASE("unknown keys are rejected by name") {
  json j = RunConfig::paper_defaults().to_json();
  j["superlattice"]["typo_key"] = 1.0;
  try {
    RunConfig::from_json(j);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("superlattice.typo_key") != std::string::npos);
  }
}

TEST_CASE("wrong value types name the offending key") {
  json j = RunConfig::paper_defaults().to_json();
  j["right_handed"]["cell_count"] = "twenty";
  try {
    RunConfig::from_json(j);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("right_handed.cell_count") != std::string::npos);
  }
}

TEST_CASE("semantic validation failures carry the key") {
  json j = RunConfig::paper_defaults().to_json();
  j["qubit"]["g_over_wsl"]["count"] = 0;
  CHECK_THROWS_AS(RunConfig::from_json(j), std::invalid_argument);
}

TEST_CASE("a present block must be complete") {
  json j = RunConfig::paper_defaults().to_json();
  j["superlattice"].erase("ratio");
  try {
    RunConfig::from_json(j);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("superlattice.ratio") != std::string::npos);
  }

  // omitting a whole block falls back to its defaults
  json partial;
  partial["superlattice"] = RunConfig::paper_defaults().to_json()["superlattice"];
  const RunConfig config = RunConfig::from_json(partial);
  CHECK(config.right_handed.cell_count == RunConfig::paper_defaults().right_handed.cell_count);
}

TEST_CASE("coupling grid construction") {
  QubitGridConfig grid;
  grid.g_over_wsl_min = 0.0;
  grid.g_over_wsl_max = 0.3;
  grid.g_count = 4;
  const auto g = grid.g_grid_over_wsl();
  REQUIRE(g.size() == 4);
  CHECK(g[0] == 0.0);
  CHECK(g[3] == 0.3);
  CHECK(g[1] == doctest::Approx(0.1));

  grid.g_count = 1;
  CHECK(grid.g_grid_over_wsl() == std::vector<double>{0.0});
}

TEST_CASE("cli: dispersion row count and determinism") {
  TempDir dir("sltl_cli_dispersion");
  const fs::path log = dir.path / "log";
  REQUIRE(run_cli("dispersion --k-points 100 --out " + dir.path.string(), log) == 0);
  const std::string first = slurp(dir.path / "dispersion.csv");

  // two comment lines, one header, 100 rows per branch
  int data_rows = 0;
  int comment_rows = 0;
  std::istringstream stream(first);
  std::string line;
  bool header_seen = false;
  while (std::getline(stream, line)) {
    if (line.rfind("#", 0) == 0) {
      ++comment_rows;
    } else if (!header_seen) {
      header_seen = true;
      CHECK(line == "k_rad_per_m,omega_rad_s,omega_over_wsl,branch");
    } else if (!line.empty()) {
      ++data_rows;
    }
  }
  CHECK(comment_rows == 2);
  CHECK(data_rows == 200);
  CHECK(first.find("band_edges_rad_s") != std::string::npos);

  // byte-identical rerun
  REQUIRE(run_cli("dispersion --k-points 100 --out " + dir.path.string(), log) == 0);
  CHECK(slurp(dir.path / "dispersion.csv") == first);
}

TEST_CASE("cli: dispersion header carries the band-edge summary") {
  TempDir dir("sltl_cli_disp_header");
  const fs::path log = dir.path / "log";

  SUBCASE("equal cells report a closed gap") {
    REQUIRE(run_cli("dispersion --set superlattice.ratio=1 --out " + dir.path.string(), log) ==
            0);
    const std::string csv = slurp(dir.path / "dispersion.csv");
    CHECK(csv.find("gap_width=0 ") != std::string::npos);
  }

  SUBCASE("header edges match the closed forms") {
    REQUIRE(run_cli("dispersion --out " + dir.path.string(), log) == 0);
    const std::string csv = slurp(dir.path / "dispersion.csv");
    const BandEdges e = band_edges(RunConfig::paper_defaults().superlattice);
    const auto grab = [&](const std::string& key) {
      const auto pos = csv.find(key + "=");
      REQUIRE(pos != std::string::npos);
      return std::stod(csv.substr(pos + key.size() + 1));
    };
    CHECK(std::abs(grab("omega_1minus") - e.lower_min) <= 1e-12 * e.lower_min);
    CHECK(std::abs(grab("omega_1plus") - e.lower_max) <= 1e-12 * e.lower_max);
    CHECK(std::abs(grab("omega_2") - e.upper_min) <= 1e-12 * e.upper_min);
  }
}

TEST_CASE("cli: band edges against the library closed forms") {
  TempDir dir("sltl_cli_edges");
  const fs::path log = dir.path / "log";
  REQUIRE(run_cli("band-edges --format json --out " + dir.path.string(), log) == 0);
  const json j = json::parse(slurp(dir.path / "band_edges.json"));

  const RunConfig config = RunConfig::paper_defaults();
  const BandEdges e = band_edges(config.superlattice);
  CHECK(j["band_edges"]["omega_1minus_rad_s"].get<double>() == doctest::Approx(e.lower_min));
  CHECK(j["band_edges"]["omega_1plus_rad_s"].get<double>() == doctest::Approx(e.lower_max));
  CHECK(j["band_edges"]["omega_2_rad_s"].get<double>() == doctest::Approx(e.upper_min));

  // equal cells close the gap exactly
  REQUIRE(run_cli("band-edges --format json --set superlattice.ratio=1 --out " +
                      dir.path.string(),
                  log) == 0);
  const json j1 = json::parse(slurp(dir.path / "band_edges.json"));
  CHECK(j1["band_edges"]["gap_width_rad_s"].get<double>() == 0.0);
}

TEST_CASE("cli: config errors produce machine-readable json and nonzero exit") {
  TempDir dir("sltl_cli_errors");
  const fs::path log = dir.path / "stdout.json";

  SUBCASE("unknown key in a config file") {
    const fs::path cfg = dir.path / "bad.json";
    {
      json j = RunConfig::paper_defaults().to_json();
      j["solver"]["bogus"] = 1;
      std::ofstream out(cfg);
      out << j.dump(2);
    }
    CHECK(run_cli("band-edges --config " + cfg.string() + " --out " + dir.path.string(), log) !=
          0);
    const json err = json::parse(slurp(log));
    CHECK(err.contains("error"));
    CHECK(err["error"].get<std::string>().find("solver.bogus") != std::string::npos);
  }

  SUBCASE("invalid value via --set") {
    CHECK(run_cli("band-edges --set superlattice.ratio=-2 --out " + dir.path.string(), log) != 0);
    const json err = json::parse(slurp(log));
    CHECK(err.contains("error"));
    CHECK(err["error"].get<std::string>().find("ratio") != std::string::npos);
  }

  SUBCASE("missing required key in a present block") {
    const fs::path cfg = dir.path / "incomplete.json";
    {
      json j = RunConfig::paper_defaults().to_json();
      j["right_handed"].erase("length_m");
      std::ofstream out(cfg);
      out << j.dump(2);
    }
    CHECK(run_cli("band-edges --config " + cfg.string() + " --out " + dir.path.string(), log) !=
          0);
    const json err = json::parse(slurp(log));
    CHECK(err["error"].get<std::string>().find("right_handed.length_m") != std::string::npos);
  }

  SUBCASE("malformed config file") {
    const fs::path cfg = dir.path / "broken.json";
    std::ofstream(cfg) << "{ not json";
    CHECK(run_cli("band-edges --config " + cfg.string(), log) != 0);
    const json err = json::parse(slurp(log));
    CHECK(err["error"].get<std::string>().find("parse error") != std::string::npos);
  }
}

TEST_CASE("cli: modes, dom, profile, renormalize, phase-diagram on a small line") {
  TempDir dir("sltl_cli_small");
  const fs::path log = dir.path / "log";
  const std::string small = " --set superlattice.supercell_count=30 --out " + dir.path.string();

  REQUIRE(run_cli("modes" + small, log) == 0);
  const json modes = json::parse(slurp(dir.path / "modes.json"));
  CHECK(modes["band1_count"].get<int>() >= 28);
  CHECK(modes["band1_count"].get<int>() <= 32);
  CHECK(fs::exists(dir.path / "modes.csv"));

  REQUIRE(run_cli("dom" + small, log) == 0);
  const json dom = json::parse(slurp(dir.path / "dom.json"));
  CHECK(dom["alpha1"].get<double>() > 0.0);
  CHECK(dom["alpha2"].get<double>() > 0.0);

  REQUIRE(run_cli("profile --indices 5-6" + small, log) == 0);
  CHECK(fs::exists(dir.path / "profile_band1_mode5.csv"));
  CHECK(fs::exists(dir.path / "profile_band1_mode6.csv"));
  const std::string header = slurp(dir.path / "profile_band1_mode5.csv").substr(0, 33);
  CHECK(header == "z_m,re_V,im_V,re_I,im_I,segment\n0");

  REQUIRE(run_cli("profile --indices 999" + small, log) != 0);
  CHECK(json::parse(slurp(log))["error"].get<std::string>().find("out of range") !=
        std::string::npos);

  REQUIRE(run_cli("renormalize --set qubit.g_over_wsl.count=5" + small, log) == 0);
  CHECK(fs::exists(dir.path / "renormalize.csv"));

  REQUIRE(run_cli("phase-diagram --set qubit.g_over_wsl.count=13" + small, log) == 0);
  const json pd = json::parse(slurp(dir.path / "phase_diagram.json"));
  CHECK(pd["run"]["g_count"].get<int>() == 13);
  const std::string pd_csv = slurp(dir.path / "phase_diagram.csv");
  CHECK(pd_csv.rfind("delta0_over_wsl,g_over_wsl,delta_eff_over_wsl,phase,converged\n", 0) == 0);

  // determinism of a full pipeline artifact
  const std::string first = slurp(dir.path / "phase_diagram.csv");
  REQUIRE(run_cli("phase-diagram --set qubit.g_over_wsl.count=13" + small, log) == 0);
  CHECK(slurp(dir.path / "phase_diagram.csv") == first);
}
