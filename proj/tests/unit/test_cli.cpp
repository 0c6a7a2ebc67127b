#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "fracham/field_io.hpp"
#include "fracham_cli/commands.hpp"

using namespace fracham;
using namespace fracham::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "fracham_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FRACHAM_RUN_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config_in(const fs::path& dir) {
  RunConfig cfg;
  cfg.output.dir = dir.string();
  return cfg;
}

}  // namespace

TEST_CASE("config parsing rejects unknown keys and bad types", "[cli][config]") {
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"solver":{"tol":1}})")),
                    Catch::Matchers::ContainsSubstring("solver.tol"));
  CHECK_THROWS_WITH(parse_config(json::parse(R"({"grid":{"N":"big"}})")),
                    Catch::Matchers::ContainsSubstring("grid.N"));
  CHECK_THROWS_AS(parse_config(json::parse(R"({"bogus":{}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"([1,2])")), ConfigError);
}

TEST_CASE("config validation names the violated constraint", "[cli][config]") {
  RunConfig cfg = parse_config(json::parse(R"({"grid":{"N":8}})"));
  CHECK_THROWS_WITH(cfg.validate(), Catch::Matchers::ContainsSubstring("grid.N"));
  cfg = parse_config(json::parse(R"({"family":{"name":"nope"}})"));
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = parse_config(json::parse(R"({"solver":{"armijo_factor":2.0}})"));
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_NOTHROW(RunConfig{}.validate());
}

TEST_CASE("resolved config round-trips", "[cli][config]") {
  RunConfig cfg = parse_config(json::parse(R"({"grid":{"N":1024},"solver":{"seed":9}})"));
  const json resolved = to_json(cfg);
  CHECK(resolved["grid"]["L"] == 40.0);
  const RunConfig again = parse_config(resolved);
  CHECK(to_json(again) == resolved);
}

TEST_CASE("solve writes artifacts and succeeds on the default config", "[cli]") {
  const fs::path dir = scratch("solve");
  std::ostringstream log;
  CHECK(cmd_solve(config_in(dir), log) == kExitOk);
  for (const char* f : {"resolved_config.json", "report.json", "trace.csv", "ground_state_u.bin",
                        "ground_state_v.bin"}) {
    CHECK(fs::exists(dir / f));
  }
  const json report = read_json(dir / "report.json");
  CHECK(report["success"] == true);
  CHECK(report["residuals"]["pohozaev"].get<double>() <= 1e-3);
  CHECK(report["level"].get<double>() > 0.0);
}

TEST_CASE("identical seed and config reproduce bit-identical CSVs", "[cli]") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  std::ostringstream log;
  RunConfig ca = config_in(a);
  ca.solver.seed = 12345;
  RunConfig cb = ca;
  cb.output.dir = b.string();
  REQUIRE(cmd_solve(ca, log) == kExitOk);
  REQUIRE(cmd_solve(cb, log) == kExitOk);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "ground_state_u.bin") == slurp(b / "ground_state_u.bin"));
  REQUIRE(cmd_audit(ca, log) == kExitOk);
  REQUIRE(cmd_audit(cb, log) == kExitOk);
  CHECK(slurp(a / "audit.csv") == slurp(b / "audit.csv"));
}

TEST_CASE("forced iteration cap exits 1 with partial artifacts", "[cli]") {
  const fs::path dir = scratch("cap");
  RunConfig cfg = config_in(dir);
  cfg.solver.max_outer = 1;
  cfg.solver.restarts = 1;
  std::ostringstream log;
  CHECK(cmd_solve(cfg, log) == kExitComputeFailure);
  CHECK(fs::exists(dir / "ground_state_u.bin"));
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(read_json(dir / "report.json")["success"] == false);
}

TEST_CASE("diagnose on zero fields reports zero residuals", "[cli]") {
  const fs::path dir = scratch("diag");
  auto g = make_grid(40.0, 256);
  write_field_binary(Field::zeros(g), dir / "u.bin");
  write_field_csv(Field::zeros(g), dir / "v.csv");
  RunConfig cfg = config_in(dir / "out");
  cfg.diagnose.u = (dir / "u.bin").string();
  cfg.diagnose.v = (dir / "v.csv").string();
  std::ostringstream log;
  CHECK(cmd_diagnose(cfg, log) == kExitOk);
  const json report = read_json(dir / "out" / "report.json");
  for (const auto& [key, value] : report["residuals"].items()) {
    INFO(key);
    CHECK(value.get<double>() == 0.0);
  }
  cfg.diagnose.u = (dir / "missing.bin").string();
  CHECK_THROWS_AS(cmd_diagnose(cfg, log), ConfigError);
}

TEST_CASE("audit passes for the default family", "[cli]") {
  const fs::path dir = scratch("audit");
  std::ostringstream log;
  CHECK(cmd_audit(config_in(dir), log) == kExitOk);
  CHECK(slurp(dir / "audit.csv").rfind("id,status,margin,worst_t", 0) == 0);
}

TEST_CASE("moser table has one row per n", "[cli]") {
  const fs::path dir = scratch("moser");
  std::ostringstream log;
  (void)cmd_moser(config_in(dir), log);
  std::ifstream in(dir / "moser.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("binary exit-code contract", "[cli]") {
  const fs::path dir = scratch("bin");
  std::ofstream(dir / "bad.json") << R"({"grid":{"N":8}})";
  std::ofstream(dir / "typo.json") << R"({"tolerances":{"pohozev":1e-3}})";
  std::ofstream(dir / "broken.json") << "{ not json";
  const std::string out = " --out " + (dir / "o").string();
  CHECK(run_binary("solve --config " + (dir / "bad.json").string() + out) == 2);
  CHECK(run_binary("solve --config " + (dir / "typo.json").string() + out) == 2);
  CHECK(run_binary("solve --config " + (dir / "broken.json").string() + out) == 2);
  CHECK(run_binary("solve --config " + (dir / "missing.json").string() + out) == 2);
  CHECK(run_binary("frobnicate") == 2);
  CHECK(run_binary("--help") == 0);
  CHECK(run_binary("audit" + out) == 0);
}
