#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <numbers>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args) {
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "planta_cli_io";
  fs::create_directories(dir);
  const auto out = dir / ("out" + std::to_string(counter) + ".txt");
  const auto err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string("PLANTA_DATA_DIR='") + PLANTA_TEST_DATA_DIR + "' '" +
                          PLANTA_CLI_PATH + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string tree_digest(const fs::path& dir) {
  std::string all;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) all += fs::relative(f, dir).string() + "\n" + slurp(f) + "\n";
  return all;
}

}  // namespace

TEST_CASE("vpd text and json") {
  const auto t = cli("vpd --leaf-temp 25 --air-temp 25 --rh 60");
  CHECK(t.exit_code == 0);
  CHECK(t.out.find("vpd_kpa: 1.26683") != std::string::npos);
  const auto j = cli("--json vpd --leaf-temp 25 --air-temp 25 --rh 60");
  CHECK(j.exit_code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["kind"] == "vpd");
  CHECK(doc["vpd_kpa"].get<double>() == doctest::Approx(1.26683));
}

TEST_CASE("exit codes") {
  CHECK(cli("--version").exit_code == 0);
  CHECK(cli("").exit_code == 2);
  CHECK(cli("vpd --leaf-temp 25").exit_code == 2);
  CHECK(cli("frobnicate").exit_code == 2);
  CHECK(cli("vpd --leaf-temp abc --air-temp 25 --rh 60").exit_code == 2);
  CHECK(cli("vpd --leaf-temp 99 --air-temp 25 --rh 60").exit_code == 3);
  CHECK(cli("analyze-stems --table /nonexistent.csv").exit_code == 3);
  CHECK(cli("min-power --readings 1 --hours 0.0001").exit_code == 4);
}

TEST_CASE("errors are structured on stderr with --json") {
  const auto r = cli("--json vpd --leaf-temp 99 --air-temp 25 --rh 60");
  CHECK(r.exit_code == 3);
  CHECK(r.out.empty());
  const auto doc = nlohmann::json::parse(r.err);
  CHECK(doc["error"]["code"] == "SanityRange");
  CHECK(doc["error"]["exit_code"] == 3);
  CHECK(!doc["error"]["message"].get<std::string>().empty());
  const auto inf = cli("--json min-power --readings 1 --hours 0.0001");
  CHECK(nlohmann::json::parse(inf.err)["error"]["code"] == "Infeasible");
}

TEST_CASE("power commands") {
  const auto m = cli("--json min-power --readings 5 --hours 24");
  REQUIRE(m.exit_code == 0);
  CHECK(nlohmann::json::parse(m.out)["min_power_w"].get<double>() ==
        doctest::Approx(2.19149e-7).epsilon(1e-5));

  const auto dir = test::scratch_dir("cli_power");
  {
    std::ofstream f(dir / "profile.csv");
    f << "t_seconds,power_watts\n0,2.5e-7\n";
  }
  const auto s = cli("--json simulate-power --profile '" + (dir / "profile.csv").string() +
                        "' --hours 24 --events '" + (dir / "events.csv").string() + "'");
  REQUIRE(s.exit_code == 0);
  const auto doc = nlohmann::json::parse(s.out);
  CHECK(doc["ledger"]["completed_readings_count"] == 5);
  CHECK(std::abs(doc["ledger"]["ledger_residual_j"].get<double>()) <= 1e-9);
  CHECK(slurp(dir / "events.csv").rfind("start_time,completed,energy_used_joules\n", 0) == 0);

  const auto p = cli("--json mpp --rh 90 --loads 5 10 20 40 80");
  REQUIRE(p.exit_code == 0);
  CHECK(nlohmann::json::parse(p.out)["load_resistance_ohm"].get<double>() == 20.0);
  CHECK(cli("mpp --rh 90 --loads 5 -1").exit_code == 3);
}

TEST_CASE("efficiency and diameter") {
  const auto e = cli("--json efficiency --output-joules 0.0589 --evaporated-grams 0.415");
  REQUIRE(e.exit_code == 0);
  const auto doc = nlohmann::json::parse(e.out);
  CHECK(doc["input_energy_j"].get<double>() == doctest::Approx(1013.6).epsilon(1e-5));
  CHECK(doc["efficiency_fraction"].get<double>() == doctest::Approx(5.81097e-5).epsilon(1e-5));
  const auto d = cli("--json diameter --rel-resistance 0.046005");
  REQUIRE(d.exit_code == 0);
  CHECK(nlohmann::json::parse(d.out)["diameter_mm"].get<double>() ==
        doctest::Approx(6.68406).epsilon(1e-6));
  CHECK(cli("diameter --rel-resistance 5").exit_code == 3);
}

TEST_CASE("analyze-stems on the shipped table") {
  const auto r = cli("--json analyze-stems");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["rows_count"] == 40);
  CHECK(doc["water"]["offset_mean_mm"].get<double>() == doctest::Approx(0.015));
  CHECK(doc["unstressed"]["label"] == "HEALTHY");
}

TEST_CASE("lag and baseline commands") {
  const auto dir = test::scratch_dir("cli_lag");
  {
    std::ofstream lo(dir / "lower.csv");
    std::ofstream up(dir / "upper.csv");
    lo << "t_seconds,rh_pct\n";
    up << "t_seconds,rh_pct\n";
    for (int i = 0; i <= 48 * 60; ++i) {
      const double t = 60.0 * i;
      auto f = [](double s) {
        const double h = s / 3600.0;
        return 60 + 8 * std::sin(2 * std::numbers::pi * h / 24) + 3 * std::sin(2 * std::numbers::pi * h / 7.3);
      };
      lo << t << "," << f(t) << "\n";
      up << t << "," << f(t - 225 * 60) << "\n";
    }
  }
  const auto r = cli("--json lag --lower '" + (dir / "lower.csv").string() + "' --upper '" +
                        (dir / "upper.csv").string() + "' --tol 100");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["lag_min"].get<double>() - 225) <= 1.0);

  {
    std::ofstream s(dir / "strain.csv");
    s << "t_seconds,rel_resistance\n";
    for (int i = 0; i < 600; ++i) s << i << "," << 0.04 + 1e-5 * i + (i >= 300 && i < 360 ? 0.05 : 0) << "\n";
  }
  const auto b = cli("--json baseline --input '" + (dir / "strain.csv").string() + "' --events '" +
                        (dir / "ev.csv").string() + "'");
  REQUIRE(b.exit_code == 0);
  CHECK(nlohmann::json::parse(b.out)["disturbances_count"] == 1);
  CHECK(slurp(dir / "ev.csv") == "onset,duration,type\n300,60,DISTURBANCE\n");
}

TEST_CASE("scenario run is byte-identical across runs") {
  const auto a = test::scratch_dir("cli_run_a");
  const auto b = test::scratch_dir("cli_run_b");
  const std::string file = (fs::path(PLANTA_TEST_DATA_DIR) / "scenarios" / "water_stress.toml").string();
  const auto ra = cli("scenario run --file '" + file + "' --seed 11 --out '" + a.string() + "'");
  const auto rb = cli("scenario run --file '" + file + "' --seed 11 --out '" + b.string() + "'");
  REQUIRE(ra.exit_code == 0);
  REQUIRE(rb.exit_code == 0);
  CHECK(tree_digest(a) == tree_digest(b));
  CHECK(fs::exists(a / "report.json"));
  const auto c = test::scratch_dir("cli_run_c");
  cli("scenario run --file '" + file + "' --seed 12 --out '" + c.string() + "'");
  CHECK(tree_digest(a) != tree_digest(c));
  CHECK(cli("scenario run --file /nonexistent.toml --out '" + c.string() + "'").exit_code == 3);
}
