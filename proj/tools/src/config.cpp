#include "fracham_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>

namespace fracham::cli {

using nlohmann::json;

namespace {

using Handler = std::function<void(const json&, const std::string&)>;

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

void dispatch(const json& j, const std::string& path,
              const std::map<std::string, Handler>& handlers) {
  require_object(j, path.empty() ? "<root>" : path);
  for (const auto& [key, value] : j.items()) {
    const std::string full = path.empty() ? key : path + "." + key;
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError("unknown key '" + full + "'");
    it->second(value, full);
  }
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
  return v;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  if (j.is_number_unsigned() &&
      j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    throw ConfigError(path + ": integer out of range");
  }
  return j.get<std::int64_t>();
}

std::size_t as_size(const json& j, const std::string& path) {
  const auto v = as_int(j, path);
  if (v < 0) throw ConfigError(path + ": must be non-negative");
  return static_cast<std::size_t>(v);
}

int as_small_int(const json& j, const std::string& path) {
  const auto v = as_int(j, path);
  if (v < INT32_MIN || v > INT32_MAX) throw ConfigError(path + ": integer out of range");
  return static_cast<int>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> as_doubles(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<int> as_ints(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_small_int(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

double RunConfig::box_length() const {
  return grid.L ? *grid.L : 40.0 * std::max(1.0, 1.0 / std::sqrt(potential.V0));
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (!(potential.V0 > 0.0)) fail("potential.V0 must be positive");
  if (potential.kind != "constant" && potential.kind != "single_well" &&
      potential.kind != "double_well") {
    fail("potential.kind must be one of constant, single_well, double_well");
  }
  if (potential.kind != "constant" && !(potential.Vinf > potential.V0)) {
    fail("potential.Vinf must exceed potential.V0");
  }
  if (potential.kind == "double_well" && !(potential.well_offset > 0.0)) {
    fail("potential.well_offset must be positive");
  }
  if (grid.L && !(*grid.L > 0.0)) fail("grid.L must be positive");
  if (grid.N < Grid::kMinPoints) {
    fail("grid.N must be >= " + std::to_string(Grid::kMinPoints) + " (got " +
         std::to_string(grid.N) + ")");
  }
  if (grid.N % 2 != 0) fail("grid.N must be even (got " + std::to_string(grid.N) + ")");
  const auto& names = builtin_family_names();
  if (std::find(names.begin(), names.end(), family.name) == names.end()) {
    fail("family.name '" + family.name + "' is not a built-in family");
  }
  if (!(family.beta0 > 0.0)) fail("family.beta0 must be positive");
  if (!(family.r1 > 0.0)) fail("family.r1 must be positive");
  try {
    solver.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
  if (!(tolerances.el > 0.0) || !(tolerances.nehari > 0.0) || !(tolerances.pohozaev > 0.0)) {
    fail("tolerances must be positive");
  }
  if (moser.n.empty()) fail("moser.n must not be empty");
  for (int n : moser.n) {
    if (n < 2) fail("moser.n entries must be >= 2");
  }
  if (!(moser.r1 > 0.0) || !(moser.r1 < 0.5 * box_length())) {
    fail("moser.r1 must lie in (0, L/2)");
  }
  if (moser.N < Grid::kMinPoints || moser.N % 2 != 0) fail("moser.N must be even and >= 16");
  if (!(moser.tol > 0.0)) fail("moser.tol must be positive");
  const double moser_h = box_length() / static_cast<double>(moser.N);
  for (int n : moser.n) {
    if (moser_h > moser.r1 / (4.0 * n)) {
      fail("moser.N too small: grid spacing L/N = " + std::to_string(moser_h) +
           " must be <= r1/(4n) = " + std::to_string(moser.r1 / (4.0 * n)) + " for n = " +
           std::to_string(n));
    }
  }
  if (!(sweep.L > 0.0)) fail("sweep.L must be positive");
  if (sweep.N < Grid::kMinPoints || sweep.N % 2 != 0) fail("sweep.N must be even and >= 16");
  if (sweep.eps.size() < 4) fail("sweep.eps needs at least 4 values");
  for (std::size_t i = 0; i < sweep.eps.size(); ++i) {
    if (!(sweep.eps[i] > 0.0)) fail("sweep.eps values must be positive");
    if (i > 0 && !(sweep.eps[i] < sweep.eps[i - 1])) fail("sweep.eps must be strictly descending");
  }
  if (sweep.eps.front() / sweep.eps.back() < 2.0) {
    fail("sweep.eps needs a ratio of at least 2 between its extremes");
  }
  if (sweep.mode != "sequential" && sweep.mode != "parallel") {
    fail("sweep.mode must be sequential or parallel");
  }
  for (std::size_t i = 0; i < sweep.theta.size(); ++i) {
    if (!(sweep.theta[i] > 0.0)) fail("sweep.theta values must be positive");
    if (i > 0 && !(sweep.theta[i] > sweep.theta[i - 1])) fail("sweep.theta must be ascending");
  }
  if (!(audit.T > 0.0) || audit.n_uniform < 2) fail("audit.T must be positive, audit.n_uniform >= 2");
  if (output.dir.empty()) fail("output.dir must not be empty");
  if (output.format != "binary" && output.format != "csv") {
    fail("output.format must be binary or csv");
  }
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  dispatch(doc, "",
           {
               {"grid",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"L", [&](const json& v, const std::string& q) { c.grid.L = as_double(v, q); }},
                            {"N", [&](const json& v, const std::string& q) { c.grid.N = as_size(v, q); }}});
                }},
               {"family",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"name", [&](const json& v, const std::string& q) { c.family.name = as_string(v, q); }},
                            {"beta0", [&](const json& v, const std::string& q) { c.family.beta0 = as_double(v, q); }},
                            {"sign_restricted",
                             [&](const json& v, const std::string& q) { c.family.sign_restricted = as_bool(v, q); }},
                            {"r1", [&](const json& v, const std::string& q) { c.family.r1 = as_double(v, q); }}});
                }},
               {"potential",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"kind", [&](const json& v, const std::string& q) { c.potential.kind = as_string(v, q); }},
                            {"V0", [&](const json& v, const std::string& q) { c.potential.V0 = as_double(v, q); }},
                            {"Vinf", [&](const json& v, const std::string& q) { c.potential.Vinf = as_double(v, q); }},
                            {"well_offset",
                             [&](const json& v, const std::string& q) { c.potential.well_offset = as_double(v, q); }}});
                }},
               {"solver",
                [&](const json& j, const std::string& p) {
                  auto& s = c.solver;
                  dispatch(j, p,
                           {{"inner_tol", [&](const json& v, const std::string& q) { s.inner_tol = as_double(v, q); }},
                            {"outer_tol", [&](const json& v, const std::string& q) { s.outer_tol = as_double(v, q); }},
                            {"max_inner", [&](const json& v, const std::string& q) { s.max_inner = as_small_int(v, q); }},
                            {"max_outer", [&](const json& v, const std::string& q) { s.max_outer = as_small_int(v, q); }},
                            {"restarts", [&](const json& v, const std::string& q) { s.restarts = as_small_int(v, q); }},
                            {"seed",
                             [&](const json& v, const std::string& q) {
                               if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
                                 throw ConfigError(q + ": expected a non-negative integer");
                               }
                               s.seed = v.get<std::uint64_t>();
                             }},
                            {"threads", [&](const json& v, const std::string& q) { s.threads = as_small_int(v, q); }},
                            {"memory", [&](const json& v, const std::string& q) { s.memory = as_small_int(v, q); }},
                            {"armijo_c", [&](const json& v, const std::string& q) { s.armijo_c = as_double(v, q); }},
                            {"armijo_factor",
                             [&](const json& v, const std::string& q) { s.armijo_factor = as_double(v, q); }},
                            {"max_backtracks",
                             [&](const json& v, const std::string& q) { s.max_backtracks = as_small_int(v, q); }},
                            {"stagnation_window",
                             [&](const json& v, const std::string& q) { s.stagnation_window = as_small_int(v, q); }},
                            {"stagnation_delta",
                             [&](const json& v, const std::string& q) { s.stagnation_delta = as_double(v, q); }},
                            {"init_width", [&](const json& v, const std::string& q) { s.init_width = as_double(v, q); }},
                            {"restart_shift_fraction",
                             [&](const json& v, const std::string& q) { s.restart_shift_fraction = as_double(v, q); }}});
                }},
               {"tolerances",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"el", [&](const json& v, const std::string& q) { c.tolerances.el = as_double(v, q); }},
                            {"nehari", [&](const json& v, const std::string& q) { c.tolerances.nehari = as_double(v, q); }},
                            {"pohozaev",
                             [&](const json& v, const std::string& q) { c.tolerances.pohozaev = as_double(v, q); }}});
                }},
               {"moser",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"n", [&](const json& v, const std::string& q) { c.moser.n = as_ints(v, q); }},
                            {"r1", [&](const json& v, const std::string& q) { c.moser.r1 = as_double(v, q); }},
                            {"N", [&](const json& v, const std::string& q) { c.moser.N = as_size(v, q); }},
                            {"tol", [&](const json& v, const std::string& q) { c.moser.tol = as_double(v, q); }}});
                }},
               {"sweep",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"eps", [&](const json& v, const std::string& q) { c.sweep.eps = as_doubles(v, q); }},
                            {"L", [&](const json& v, const std::string& q) { c.sweep.L = as_double(v, q); }},
                            {"N", [&](const json& v, const std::string& q) { c.sweep.N = as_size(v, q); }},
                            {"init_offset",
                             [&](const json& v, const std::string& q) { c.sweep.init_offset = as_double(v, q); }},
                            {"mode", [&](const json& v, const std::string& q) { c.sweep.mode = as_string(v, q); }},
                            {"theta", [&](const json& v, const std::string& q) { c.sweep.theta = as_doubles(v, q); }}});
                }},
               {"audit",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"T", [&](const json& v, const std::string& q) { c.audit.T = as_double(v, q); }},
                            {"n_uniform", [&](const json& v, const std::string& q) { c.audit.n_uniform = as_size(v, q); }},
                            {"n_log", [&](const json& v, const std::string& q) { c.audit.n_log = as_size(v, q); }}});
                }},
               {"diagnose",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"u", [&](const json& v, const std::string& q) { c.diagnose.u = as_string(v, q); }},
                            {"v", [&](const json& v, const std::string& q) { c.diagnose.v = as_string(v, q); }}});
                }},
               {"output",
                [&](const json& j, const std::string& p) {
                  dispatch(j, p,
                           {{"dir", [&](const json& v, const std::string& q) { c.output.dir = as_string(v, q); }},
                            {"dump_fields",
                             [&](const json& v, const std::string& q) { c.output.dump_fields = as_bool(v, q); }},
                            {"format", [&](const json& v, const std::string& q) { c.output.format = as_string(v, q); }}});
                }},
           });
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  const auto& s = c.solver;
  return json{
      {"grid", {{"L", c.box_length()}, {"N", c.grid.N}}},
      {"family",
       {{"name", c.family.name},
        {"beta0", c.family.beta0},
        {"sign_restricted", c.family.sign_restricted},
        {"r1", c.family.r1}}},
      {"potential",
       {{"kind", c.potential.kind},
        {"V0", c.potential.V0},
        {"Vinf", c.potential.Vinf},
        {"well_offset", c.potential.well_offset}}},
      {"solver",
       {{"inner_tol", s.inner_tol},
        {"outer_tol", s.outer_tol},
        {"max_inner", s.max_inner},
        {"max_outer", s.max_outer},
        {"restarts", s.restarts},
        {"seed", s.seed},
        {"threads", s.threads},
        {"memory", s.memory},
        {"armijo_c", s.armijo_c},
        {"armijo_factor", s.armijo_factor},
        {"max_backtracks", s.max_backtracks},
        {"stagnation_window", s.stagnation_window},
        {"stagnation_delta", s.stagnation_delta},
        {"init_width", s.init_width},
        {"restart_shift_fraction", s.restart_shift_fraction}}},
      {"tolerances",
       {{"el", c.tolerances.el}, {"nehari", c.tolerances.nehari}, {"pohozaev", c.tolerances.pohozaev}}},
      {"moser", {{"n", c.moser.n}, {"r1", c.moser.r1}, {"N", c.moser.N}, {"tol", c.moser.tol}}},
      {"sweep",
       {{"eps", c.sweep.eps},
        {"L", c.sweep.L},
        {"N", c.sweep.N},
        {"init_offset", c.sweep.init_offset},
        {"mode", c.sweep.mode},
        {"theta", c.sweep.theta}}},
      {"audit", {{"T", c.audit.T}, {"n_uniform", c.audit.n_uniform}, {"n_log", c.audit.n_log}}},
      {"diagnose", {{"u", c.diagnose.u}, {"v", c.diagnose.v}}},
      {"output",
       {{"dir", c.output.dir}, {"dump_fields", c.output.dump_fields}, {"format", c.output.format}}},
  };
}

NonlinearityFamily make_family(const RunConfig& cfg) {
  return builtin_family(cfg.family.name, cfg.family.beta0, cfg.family.sign_restricted,
                        cfg.potential.V0, cfg.family.r1);
}

Potential make_potential(const RunConfig& cfg) {
  const auto& p = cfg.potential;
  if (p.kind == "single_well") return Potential::single_well(p.V0, p.Vinf);
  if (p.kind == "double_well") return Potential::double_well(p.V0, p.Vinf, p.well_offset);
  return Potential::constant(p.V0);
}

}  // namespace fracham::cli
