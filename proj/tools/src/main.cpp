#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracham_cli/commands.hpp"

using namespace fracham::cli;

int main(int argc, char** argv) {
  CLI::App app{"Ground states of a fractional Hamiltonian system with critical exponential growth"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool dump_fields = false;
  std::vector<std::string> fields;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--seed", seed, "Restart seed (overrides solver.seed)");
  app.add_option("--threads", threads, "Worker threads (overrides solver.threads)");
  app.add_flag("--dump-fields", dump_fields, "Write per-run field dumps");

  auto* solve = app.add_subcommand("solve", "Compute a ground state and its residual report");
  auto* diagnose = app.add_subcommand("diagnose", "Residual report for stored fields");
  diagnose->add_option("--fields", fields, "Field files U V (binary or .csv)")->expected(2);
  auto* moser = app.add_subcommand("moser", "Moser-sequence seminorm and L2 table");
  auto* sweep = app.add_subcommand("sweep", "Semiclassical concentration sweep");
  auto* audit = app.add_subcommand("audit", "Check the nonlinearity hypotheses");
  for (auto* sub : {solve, diagnose, moser, sweep, audit}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!out_dir.empty()) cfg.output.dir = out_dir;
    if (seed) cfg.solver.seed = *seed;
    if (threads) cfg.solver.threads = *threads;
    if (dump_fields) cfg.output.dump_fields = true;
    if (fields.size() == 2) {
      cfg.diagnose.u = fields[0];
      cfg.diagnose.v = fields[1];
    }
    cfg.validate();

    if (*solve) return cmd_solve(cfg, std::cout);
    if (*diagnose) return cmd_diagnose(cfg, std::cout);
    if (*moser) return cmd_moser(cfg, std::cout);
    if (*sweep) return cmd_sweep(cfg, std::cout);
    return cmd_audit(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const fracham::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitComputeFailure;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << '\n';
    return kExitComputeFailure;
  }
}
