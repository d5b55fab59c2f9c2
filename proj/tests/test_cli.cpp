#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  std::string cmd = std::string(ALARMS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const std::string& name) {
  return "'" + oracle::data_path("scenarios/" + name) + "'";
}

}  // namespace

TEST_CASE("cli exit codes") {
  fs::path out = fs::temp_directory_path() / "alarms_cli_test";
  fs::remove_all(out);
  std::string o = " --out '" + out.string() + "'";

  CHECK(cli("run " + scenario("weather_advisory.json") + o) == 0);
  CHECK(fs::exists(out / "result.json"));
  CHECK(cli("run " + scenario("all_nominal.json") + o) == 4);
  CHECK(cli("run " + scenario("weather_advisory.json") + o + " --delta 0.03") == 2);
  CHECK(cli("run " + scenario("weather_advisory.json") + o + " --tau 2") == 2);
  CHECK(cli("run /nonexistent/scenario.json" + o) == 3);
  CHECK(cli("export " + scenario("caution_advisory.json") + " --curves" + o) == 0);
  CHECK(fs::exists(out / "state_CA.csv"));
  CHECK(cli("validate " + scenario("weather_advisory.json") + " --samples 20000 --seed 5") == 0);
  CHECK(cli("precompute '" + oracle::data_path("demo_matrix.json") +
            "' --hazards 'Adverse Weather' --out '" + (out / "t.json").string() + "'") == 0);
  CHECK(fs::exists(out / "t.json"));
  CHECK(cli("precompute '" + oracle::data_path("demo_matrix.json") +
            "' --hazards 'Adverse Weather,Altitude Deviation' --max-hazards 1 --out '" +
            (out / "t2.json").string() + "'") == 2);
  CHECK(cli("frobnicate") == 2);
  fs::remove_all(out);
}
