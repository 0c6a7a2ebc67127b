#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fracham/nehari.hpp"
#include "fracham/semiclassical.hpp"

namespace fracham::cli {

/// Raised for any malformed or out-of-range configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GridSpec {
  std::optional<double> L;  // defaults to 40 max(1, 1/sqrt(V0))
  std::size_t N = 2048;
};

struct FamilySpec {
  std::string name = "cubic_exp";
  double beta0 = 1.0;
  bool sign_restricted = false;
  double r1 = 2.0;
};

struct PotentialSpec {
  std::string kind = "constant";  // constant | single_well | double_well
  double V0 = 1.0;
  double Vinf = 2.0;
  double well_offset = 1.0;
};

struct Tolerances {
  double el = 1e-6;
  double nehari = 1e-6;
  double pohozaev = 1e-3;
};

struct MoserSpec {
  std::vector<int> n = {4, 16, 64};
  double r1 = 2.0;
  std::size_t N = 8192;
  double tol = 0.05;
};

struct SweepSpec {
  std::vector<double> eps = {1.0, 0.5, 0.25, 0.125};
  /// The sweep runs on its own box: the smallest eps needs V(eps L/2) near Vinf.
  double L = 80.0;
  std::size_t N = 8192;
  double init_offset = 0.5;
  std::string mode = "sequential";  // sequential | parallel
  std::vector<double> theta = {};
};

struct AuditSpec {
  double T = 10.0;
  std::size_t n_uniform = 2001;
  std::size_t n_log = 61;
};

struct DiagnoseSpec {
  std::string u;
  std::string v;
};

struct OutputSpec {
  std::string dir = "fracham_out";
  bool dump_fields = false;
  std::string format = "binary";  // binary | csv
};

struct RunConfig {
  GridSpec grid;
  FamilySpec family;
  PotentialSpec potential;
  SolverConfig solver;
  Tolerances tolerances;
  MoserSpec moser;
  SweepSpec sweep;
  AuditSpec audit;
  DiagnoseSpec diagnose;
  OutputSpec output;

  double box_length() const;
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

/// Parses a JSON document; unknown keys and wrong types are ConfigErrors.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
/// Fully resolved document (every default materialized, L filled in).
nlohmann::json to_json(const RunConfig& cfg);

NonlinearityFamily make_family(const RunConfig& cfg);
Potential make_potential(const RunConfig& cfg);

}  // namespace fracham::cli
