#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fracham/grid.hpp"

namespace fracham {

/// Exponent guard shared by every exp(beta t^2) evaluation.
inline constexpr double kExponentCeiling = 700.0;

/// Growth law of one component of the nonlinearity.
enum class GrowthLaw {
  Linear,     // t
  Cubic,      // t^3 (subcritical surrogate)
  CubicExp,   // t^3 exp(beta t^2)
  QuinticExp  // t^5 exp(beta t^2)
};

/// One scalar component s -> f(s) with its closed-form primitive.
class ScalarNonlinearity {
 public:
  ScalarNonlinearity(GrowthLaw law, double beta, bool sign_restricted);

  double value(double t) const;       // f(t)
  double primitive(double t) const;   // F(t) = int_0^t f
  double derivative(double t) const;  // f'(t)
  GrowthLaw law() const noexcept { return law_; }

 private:
  GrowthLaw law_;
  double beta_;
  bool sign_restricted_;
};

/// (f, g, F, G) and the hypothesis constants. f drives the v-equation,
/// g the u-equation: (-Delta)^{1/2}u + V u = g(v), (-Delta)^{1/2}v + V v = f(u).
struct NonlinearityFamily {
  std::string name;
  ScalarNonlinearity f_part;
  ScalarNonlinearity g_part;
  double beta0;
  double mu;
  double M;
  double kappa0;
  double r1;
  bool sign_restricted;

  double f(double t) const { return f_part.value(t); }
  double g(double t) const { return g_part.value(t); }
  double F(double t) const { return f_part.primitive(t); }
  double G(double t) const { return g_part.primitive(t); }
  double df(double t) const { return f_part.derivative(t); }
  double dg(double t) const { return g_part.derivative(t); }
  bool symmetric() const noexcept { return f_part.law() == g_part.law(); }
};

/// Built-in families:
///   "cubic_exp"          f = g = t^3 e^{beta0 t^2}
///   "cubic_quintic_exp"  f = t^3 e^{beta0 t^2}, g = t^5 e^{beta0 t^2}
///   "cubic"              f = g = t^3 (subcritical surrogate, no exponential)
///   "linear"             f = g = t (violates H2; audit fixture)
/// kappa0 is set to max{8 e^{1/2} V0 / beta0, pi / (beta0 r1)} + 1.
NonlinearityFamily builtin_family(const std::string& name, double beta0,
                                  bool sign_restricted = false, double V0 = 1.0,
                                  double r1 = 2.0);

const std::vector<std::string>& builtin_family_names();

enum class AuditStatus { Pass, Fail, Inconclusive };
const char* to_string(AuditStatus s);

struct HypothesisCheck {
  std::string id;  // "H1" .. "H7"
  AuditStatus status = AuditStatus::Inconclusive;
  double worst_t = 0.0;  // sample with the smallest margin
  double margin = 0.0;   // smallest margin seen (negative means violated)
  std::size_t n_samples = 0;
  std::string sample_set;
};

struct HypothesisAudit {
  std::array<HypothesisCheck, 7> checks;
  bool all_pass() const;
  const HypothesisCheck& at(const std::string& id) const;
};

/// Samples on [-T, T]: a uniform grid plus log-spaced points in
/// +-[1e-6, 1e-1]; sorted, no duplicates, includes no zero.
std::vector<double> audit_sample_grid(double T = 10.0, std::size_t n_uniform = 2001,
                                      std::size_t n_log = 61);

HypothesisAudit audit_hypotheses(const NonlinearityFamily& fam,
                                 const std::vector<double>& t_grid);

/// int (exp(beta u^2) - 1) dx; OverflowGuard if beta u^2 > 700 anywhere.
double trudinger_moser_functional(const Field& u, double beta);

}  // namespace fracham
