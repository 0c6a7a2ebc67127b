#include "fracham/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace fracham {

namespace {

double guarded_exp(double beta, double t) {
  const double x = beta * t * t;
  if (x > kExponentCeiling) {
    std::ostringstream msg;
    msg << "exponent beta*t^2 = " << x << " exceeds " << kExponentCeiling
        << " at t = " << t;
    throw OverflowGuard(msg.str(), t);
  }
  return std::exp(x);
}

// t^{p} * sum_k x^k / (k! (2k + p)) with x = beta t^2; valid for small x.
double primitive_series(double t, double beta, int p) {
  const double x = beta * t * t;
  double term = 1.0;  // x^k / k!
  double sum = 1.0 / p;
  for (int k = 1; k < 60; ++k) {
    term *= x / k;
    const double add = term / (2 * k + p);
    sum += add;
    if (add < 1e-18 * sum) break;
  }
  return std::pow(t, p) * sum;
}

}  // namespace

ScalarNonlinearity::ScalarNonlinearity(GrowthLaw law, double beta, bool sign_restricted)
    : law_(law), beta_(beta), sign_restricted_(sign_restricted) {}

double ScalarNonlinearity::value(double t) const {
  if (sign_restricted_ && t <= 0.0) return 0.0;
  switch (law_) {
    case GrowthLaw::Linear:
      return t;
    case GrowthLaw::Cubic:
      return t * t * t;
    case GrowthLaw::CubicExp:
      return t * t * t * guarded_exp(beta_, t);
    case GrowthLaw::QuinticExp: {
      const double t2 = t * t;
      return t2 * t2 * t * guarded_exp(beta_, t);
    }
  }
  return 0.0;
}

double ScalarNonlinearity::primitive(double t) const {
  if (sign_restricted_ && t <= 0.0) return 0.0;
  const double t2 = t * t;
  const double x = beta_ * t2;
  switch (law_) {
    case GrowthLaw::Linear:
      return 0.5 * t2;
    case GrowthLaw::Cubic:
      return 0.25 * t2 * t2;
    case GrowthLaw::CubicExp: {
      if (x < 0.5) return primitive_series(std::abs(t), beta_, 4);
      const double e = guarded_exp(beta_, t);
      return (x * e - std::expm1(x)) / (2.0 * beta_ * beta_);
    }
    case GrowthLaw::QuinticExp: {
      if (x < 0.5) return primitive_series(std::abs(t), beta_, 6);
      const double e = guarded_exp(beta_, t);
      return (e * (x * x - 2.0 * x + 2.0) - 2.0) / (2.0 * beta_ * beta_ * beta_);
    }
  }
  return 0.0;
}

double ScalarNonlinearity::derivative(double t) const {
  if (sign_restricted_ && t <= 0.0) return 0.0;
  const double t2 = t * t;
  switch (law_) {
    case GrowthLaw::Linear:
      return 1.0;
    case GrowthLaw::Cubic:
      return 3.0 * t2;
    case GrowthLaw::CubicExp:
      return (3.0 * t2 + 2.0 * beta_ * t2 * t2) * guarded_exp(beta_, t);
    case GrowthLaw::QuinticExp:
      return (5.0 * t2 * t2 + 2.0 * beta_ * t2 * t2 * t2) * guarded_exp(beta_, t);
  }
  return 0.0;
}

const std::vector<std::string>& builtin_family_names() {
  static const std::vector<std::string> names = {"cubic_exp", "cubic_quintic_exp",
                                                 "cubic", "linear"};
  return names;
}

NonlinearityFamily builtin_family(const std::string& name, double beta0,
                                  bool sign_restricted, double V0, double r1) {
  if (!(beta0 > 0.0)) throw Error("beta0 must be positive");
  if (!(r1 > 0.0)) throw Error("r1 must be positive");
  GrowthLaw fl, gl;
  double mu = 4.0;
  if (name == "cubic_exp") {
    fl = gl = GrowthLaw::CubicExp;
  } else if (name == "cubic_quintic_exp") {
    fl = GrowthLaw::CubicExp;
    gl = GrowthLaw::QuinticExp;
  } else if (name == "cubic") {
    fl = gl = GrowthLaw::Cubic;
  } else if (name == "linear") {
    fl = gl = GrowthLaw::Linear;
    mu = 2.0;
  } else {
    throw UnknownFamily("unknown nonlinearity family '" + name + "'");
  }
  const double kappa0 =
      std::max(8.0 * std::sqrt(std::numbers::e) * V0 / beta0,
               std::numbers::pi / (beta0 * r1)) +
      1.0;
  // sup F/|f| is attained near t ~ beta0^{-1/2} and scales like beta0^{-1/2}.
  const double M = std::max(1.0, 1.0 / std::sqrt(beta0));
  return NonlinearityFamily{name,
                            ScalarNonlinearity(fl, beta0, sign_restricted),
                            ScalarNonlinearity(gl, beta0, sign_restricted),
                            beta0,
                            mu,
                            M,
                            kappa0,
                            r1,
                            sign_restricted};
}

const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::Pass:
      return "pass";
    case AuditStatus::Fail:
      return "fail";
    case AuditStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool HypothesisAudit::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.status == AuditStatus::Pass; });
}

const HypothesisCheck& HypothesisAudit::at(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return c;
  }
  throw Error("no hypothesis " + id + " in audit");
}

std::vector<double> audit_sample_grid(double T, std::size_t n_uniform, std::size_t n_log) {
  std::vector<double> ts;
  for (std::size_t i = 0; i < n_uniform; ++i) {
    const double t = -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(n_uniform - 1);
    if (t != 0.0) ts.push_back(t);
  }
  for (std::size_t i = 0; i < n_log; ++i) {
    const double e = -6.0 + 5.0 * static_cast<double>(i) / static_cast<double>(n_log - 1);
    ts.push_back(std::pow(10.0, e));
    ts.push_back(-std::pow(10.0, e));
  }
  std::sort(ts.begin(), ts.end());
  // The uniform and logarithmic grids meet at points like 0.1 up to rounding;
  // such near-duplicates would turn strict monotonicity into a 1-ulp test.
  const auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
  };
  ts.erase(std::unique(ts.begin(), ts.end(), close), ts.end());
  std::erase_if(ts, [](double t) { return std::abs(t) < 1e-300; });
  return ts;
}

namespace {

constexpr double kAuditTol = 1e-12;

struct MarginTracker {
  double margin = std::numeric_limits<double>::infinity();
  double worst_t = 0.0;
  std::size_t n = 0;
  void add(double t, double m) {
    ++n;
    if (m < margin) {
      margin = m;
      worst_t = t;
    }
  }
};

// Non-strict inequality: margin >= 0 passes, rounding-level violations are
// inconclusive.
AuditStatus weak_status(double margin) {
  if (margin >= 0.0) return AuditStatus::Pass;
  if (margin >= -kAuditTol) return AuditStatus::Inconclusive;
  return AuditStatus::Fail;
}

// Strict inequality: the margin has to clear the rounding band.
AuditStatus strict_status(double margin) {
  if (margin > kAuditTol) return AuditStatus::Pass;
  if (margin >= -kAuditTol) return AuditStatus::Inconclusive;
  return AuditStatus::Fail;
}

HypothesisCheck finish(const std::string& id, const MarginTracker& m, AuditStatus status,
                       const std::string& samples) {
  HypothesisCheck c;
  c.id = id;
  c.status = m.n == 0 ? AuditStatus::Inconclusive : status;
  c.margin = m.n == 0 ? 0.0 : m.margin;
  c.worst_t = m.worst_t;
  c.n_samples = m.n;
  c.sample_set = samples;
  return c;
}

using Scalar = std::function<double(double)>;

}  // namespace

HypothesisAudit audit_hypotheses(const NonlinearityFamily& fam,
                                 const std::vector<double>& t_grid) {
  const double beta0 = fam.beta0;
  // Samples usable without tripping the exponent guard.
  const double t_safe = std::sqrt(0.95 * kExponentCeiling / beta0);
  std::vector<double> ts;
  double t_max = 0.0;
  for (double t : t_grid) {
    if (t == 0.0 || std::abs(t) > t_safe) continue;
    if (fam.sign_restricted && t < 0.0) continue;
    ts.push_back(t);
    t_max = std::max(t_max, std::abs(t));
  }
  std::sort(ts.begin(), ts.end());

  std::ostringstream desc;
  desc << ts.size() << " samples in [" << (ts.empty() ? 0.0 : ts.front()) << ", "
       << (ts.empty() ? 0.0 : ts.back()) << "]"
       << (fam.sign_restricted ? " (t > 0 only: sign-restricted family)" : "");
  const std::string samples = desc.str();

  const std::array<std::pair<Scalar, Scalar>, 2> comps = {
      std::pair<Scalar, Scalar>{[&](double t) { return fam.f(t); },
                                [&](double t) { return fam.F(t); }},
      std::pair<Scalar, Scalar>{[&](double t) { return fam.g(t); },
                                [&](double t) { return fam.G(t); }}};

  HypothesisAudit audit;

  {  // H1: continuity, probed by relative perturbation.
    MarginTracker m;
    for (const auto& [f, F] : comps) {
      for (double t : ts) {
        const double a = f(t);
        const double b = f(t * (1.0 + 1e-9));
        const double scale = 1e-6 * (1.0 + std::abs(a));
        m.add(t, std::isfinite(a) && std::isfinite(b) ? (scale - std::abs(b - a)) / scale : -1.0);
      }
    }
    audit.checks[0] = finish("H1", m, weak_status(m.margin), samples);
  }

  {  // H2: f(t)/t^2 -> 0 as t -> 0.
    MarginTracker m;
    bool monotone = true;
    for (const auto& [f, F] : comps) {
      for (int sign : {1, -1}) {
        if (fam.sign_restricted && sign < 0) continue;
        double prev = std::numeric_limits<double>::infinity();
        for (int e = 1; e <= 6; ++e) {
          const double t = sign * std::pow(10.0, -e);
          const double ratio = std::abs(f(t)) / (t * t);
          if (ratio > prev * (1.0 + 1e-12) && ratio > 0.0) monotone = false;
          prev = ratio;
          if (e == 6) m.add(t, (1e-5 - ratio) / 1e-5);
        }
      }
    }
    if (!monotone) m.add(0.0, -1.0);
    audit.checks[1] = finish("H2", m, strict_status(m.margin), "t = +-1e-1 .. 1e-6");
  }

  {  // H3: 0 <= mu F(t) <= t f(t).
    MarginTracker m;
    for (const auto& [f, F] : comps) {
      for (double t : ts) {
        const double tf = t * f(t);
        const double muF = fam.mu * F(t);
        const double scale = std::abs(tf) + std::abs(muF) + 1e-300;
        m.add(t, std::min(muF / scale, (tf - muF) / scale));
      }
    }
    audit.checks[2] = finish("H3", m, weak_status(m.margin), samples);
  }

  {  // H4: 0 < F(t) <= M |f(t)|.
    MarginTracker m;
    for (const auto& [f, F] : comps) {
      for (double t : ts) {
        const double Ft = F(t);
        const double Mf = fam.M * std::abs(f(t));
        if (!(Ft > 0.0)) {
          m.add(t, -1.0);
          continue;
        }
        m.add(t, (Mf - Ft) / (Mf + Ft));
      }
    }
    audit.checks[3] = finish("H4", m, weak_status(m.margin), samples);
  }

  {  // H5: f(t)/|t| strictly increasing along the sorted samples.
    MarginTracker m;
    for (const auto& [f, F] : comps) {
      for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        const double q0 = f(ts[i]) / std::abs(ts[i]);
        const double q1 = f(ts[i + 1]) / std::abs(ts[i + 1]);
        const double scale = std::abs(q0) + std::abs(q1) + 1e-300;
        m.add(ts[i], (q1 - q0) / scale);
      }
    }
    audit.checks[4] = finish("H5", m, strict_status(m.margin), samples);
  }

  {  // H6: f e^{-beta t^2} -> 0 for beta > beta0 and -> inf for beta < beta0.
    MarginTracker m;
    const double t_hi = t_max;
    const double t_lo = 0.5 * t_max;
    for (const auto& [f, F] : comps) {
      for (double factor : {1.2, 0.8}) {
        const double beta = factor * beta0;
        const double lo = std::log(std::abs(f(t_lo))) - beta * t_lo * t_lo;
        const double hi = std::log(std::abs(f(t_hi))) - beta * t_hi * t_hi;
        const double trend = factor > 1.0 ? lo - hi : hi - lo;
        m.add(t_hi, std::isfinite(trend) ? trend : -1.0);
      }
    }
    std::ostringstream d;
    d << "log-ratio trend between t = " << t_lo << " and " << t_hi
      << " at beta = 0.8 beta0, 1.2 beta0";
    audit.checks[5] = finish("H6", m, strict_status(m.margin), d.str());
  }

  {  // H7: f(t) t e^{-beta0 t^2} >= kappa0 on the sampled tail |t| >= T/2.
    MarginTracker m;
    for (const auto& [f, F] : comps) {
      for (double t : ts) {
        if (std::abs(t) < 0.5 * t_max) continue;
        const double v = f(t) * t * std::exp(-beta0 * t * t);
        m.add(t, (v - fam.kappa0) / fam.kappa0);
      }
    }
    std::ostringstream d;
    d << "tail |t| >= " << 0.5 * t_max << " of " << samples << ", kappa0 = " << fam.kappa0;
    audit.checks[6] = finish("H7", m, weak_status(m.margin), d.str());
  }

  return audit;
}

double trudinger_moser_functional(const Field& u, double beta) {
  if (!(beta > 0.0)) throw Error("Trudinger-Moser exponent must be positive");
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = beta * u[j] * u[j];
    if (x > kExponentCeiling) {
      std::ostringstream msg;
      msg << "beta*u^2 = " << x << " exceeds " << kExponentCeiling << " at x = "
          << u.grid().x(j);
      throw OverflowGuard(msg.str(), u.grid().x(j));
    }
    acc += std::expm1(x);
  }
  return acc * u.grid().spacing();
}

}  // namespace fracham
