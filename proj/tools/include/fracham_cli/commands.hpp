#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>

#include "fracham_cli/config.hpp"

namespace fracham::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputeFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Each command expects a validated config, writes resolved_config.json and
/// its artifacts under cfg.output.dir, logs to `log`, and returns the exit
/// code. Configuration problems discovered late (unreadable field files,
/// unresolved grids) raise ConfigError.
int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_diagnose(const RunConfig& cfg, std::ostream& log);
int cmd_moser(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_audit(const RunConfig& cfg, std::ostream& log);

}  // namespace fracham::cli
