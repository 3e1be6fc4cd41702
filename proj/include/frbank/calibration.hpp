#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frbank/aggregates.hpp"
#include "frbank/econometrics.hpp"
#include "frbank/equilibrium.hpp"
#include "frbank/simplex.hpp"

namespace frbank {

// One year of the policy environment plus the observed credit ratio used to
// back out the credit limit.
struct ScenarioRow {
  std::string period;
  double i = 0.0;
  double i_r = 0.0;
  double chi = 0.1;
  double uc_over_y_obs = 0.0;
};

// Full parameter bundle: preferences, bank costs, and meeting probabilities.
struct ModelParams {
  Preferences prefs;
  BankCostParams costs;
  double sigma1;
  double sigma3;

  ModelParams(const Preferences& p, const BankCostParams& c, double s1, double s3)
      : prefs(p), costs(c), sigma1(s1), sigma3(s3) {
    if (!(s1 >= 0.0) || !(s3 >= 0.0) || !(s1 + s3 <= 1.0))
      throw DomainError("ModelParams: meeting probabilities out of range");
  }

  double sigma2() const { return 1.0 - sigma1 - sigma3; }

  PolicyPoint policy(double i, double i_r, double chi, double delta_bar) const {
    return PolicyPoint(i, i_r, chi, delta_bar, sigma1, sigma2(), sigma3);
  }
};

// Credit limit consistent with an observed unsecured-credit-to-output ratio:
// safeguarded bisection (with secant acceleration) on the monotone map
// delta_bar -> uc_over_y, re-solving the equilibrium at each trial limit.
inline double backout_delta(const ModelParams& mp, const PolicyPoint& base,
                            double uc_over_y_obs,
                            OutputDefinition ydef = OutputDefinition::b_plus_dm,
                            double tol = 1e-9) {
  if (!(uc_over_y_obs >= 0.0))
    throw DomainError("backout_delta: observed ratio must be nonnegative");
  if (uc_over_y_obs == 0.0) return 0.0;

  const RegimeCore core = solve_core(mp.prefs, mp.costs, base);
  auto uc_at = [&](double dbar) {
    const PolicyPoint p = mp.policy(base.i, base.i_r, base.chi, dbar);
    const Equilibrium eq = apply_credit(mp.prefs, mp.costs, core, p);
    return aggregates(eq, mp.prefs, mp.costs, ydef).uc_over_y;
  };

  // The ratio plateaus once the limit covers the liquidity target, so the
  // value at p* is its supremum.
  double hi = mp.prefs.p_star();
  double f_hi = uc_at(hi) - uc_over_y_obs;
  if (f_hi < -tol) {
    std::ostringstream msg;
    msg << "backout_delta: target uc_over_y " << uc_over_y_obs
        << " exceeds the model supremum " << (f_hi + uc_over_y_obs)
        << " at this policy";
    throw DomainError(msg.str());
  }
  double lo = 0.0;
  double f_lo = -uc_over_y_obs;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fx = uc_at(x) - uc_over_y_obs;
    if (std::abs(fx) <= tol) return x;
    if ((fx > 0.0) == (f_lo > 0.0)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
    double next = (f_hi != f_lo) ? lo - f_lo * (hi - lo) / (f_hi - f_lo)
                                 : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4e-16 * std::max(1.0, hi)) return next;
    x = next;
  }
  return x;
}

// Time-averaged model statistics over a scenario, with the per-row credit
// limit backed out from the observed ratio.
struct Moments {
  double c_over_y = 0.0;
  std::optional<double> cd_ratio;
  double uc_over_dm = 0.0;
  double r_over_y = 0.0;
  double pi_over_y = 0.0;
  double pi_over_deposits = 0.0;
  std::optional<double> markup;
  std::optional<double> semi_elasticity;  // absent without rate variation

  std::optional<double> by_name(const std::string& name) const {
    if (name == "c_over_y") return c_over_y;
    if (name == "cd_ratio") return cd_ratio;
    if (name == "uc_over_dm") return uc_over_dm;
    if (name == "r_over_y") return r_over_y;
    if (name == "pi_over_y") return pi_over_y;
    if (name == "pi_over_deposits") return pi_over_deposits;
    if (name == "markup") return markup;
    if (name == "semi_elasticity") return semi_elasticity;
    throw DomainError("unknown moment name: " + name);
  }
};

inline Moments model_moments(const ModelParams& mp,
                             const std::vector<ScenarioRow>& scenario,
                             OutputDefinition ydef = OutputDefinition::b_plus_dm) {
  if (scenario.empty()) throw DomainError("model_moments: empty scenario");
  Moments out;
  double cd_sum = 0.0, markup_sum = 0.0;
  std::size_t cd_n = 0, markup_n = 0;
  std::vector<double> rates, log_cy;
  for (const ScenarioRow& row : scenario) {
    try {
      const PolicyPoint base = mp.policy(row.i, row.i_r, row.chi, 0.0);
      const double dbar = backout_delta(mp, base, row.uc_over_y_obs, ydef);
      const PolicyPoint p = mp.policy(row.i, row.i_r, row.chi, dbar);
      const Equilibrium eq = solve(mp.prefs, mp.costs, p);
      const AggregateStats s = aggregates(eq, mp.prefs, mp.costs, ydef);
      out.c_over_y += s.c_over_y;
      out.uc_over_dm += s.uc_over_dm;
      out.r_over_y += s.r_over_y;
      out.pi_over_y += s.pi_over_y;
      out.pi_over_deposits += s.pi_over_deposits;
      if (s.cd_ratio) {
        cd_sum += *s.cd_ratio;
        ++cd_n;
      }
      if (s.markup) {
        markup_sum += *s.markup;
        ++markup_n;
      }
      if (s.c_over_y > 0.0) {
        rates.push_back(row.i);
        log_cy.push_back(std::log(s.c_over_y));
      }
    } catch (const DomainError& e) {
      throw DomainError("model_moments: row '" + row.period + "': " + e.what());
    } catch (const SolverError& e) {
      throw SolverError("model_moments: row '" + row.period + "': " + e.what());
    }
  }
  const double n = static_cast<double>(scenario.size());
  out.c_over_y /= n;
  out.uc_over_dm /= n;
  out.r_over_y /= n;
  out.pi_over_y /= n;
  out.pi_over_deposits /= n;
  if (cd_n > 0) out.cd_ratio = cd_sum / cd_n;
  if (markup_n > 0) out.markup = markup_sum / markup_n;
  // Semi-elasticity of c_over_y with respect to i: slope of the log-level
  // regression. Degenerate designs (no rate variation) leave it absent.
  if (rates.size() >= 3) {
    try {
      out.semi_elasticity = ols_nw(log_cy, {rates}, 0).coef[1];
    } catch (const DomainError&) {
    }
  }
  return out;
}

struct Target {
  std::string name;
  double value = 0.0;
  double weight = 1.0;
};

struct ParamBounds {
  // Order: theta, A, B, b, k, E, sigma1.
  std::array<double, 7> lo{0.01, 1e-6, 1e-6, 0.05, 1e-6, 1e-6, 0.01};
  std::array<double, 7> hi{0.99, 10.0, 10.0, 0.95, 10.0, 10.0, 0.99};
};

struct CalibrationOptions {
  int starts = 16;
  unsigned seed = 7001;
  double spread = 0.20;   // multiplicative start perturbation
  int max_iter = 4000;    // simplex iterations per restart
  int restarts = 3;
};

struct CalibrationSpec {
  ModelParams start;      // initial guess; sigma3 and a stay fixed
  std::vector<Target> targets;
  std::vector<ScenarioRow> scenario;
  ParamBounds bounds;
  CalibrationOptions options;
  OutputDefinition ydef = OutputDefinition::b_plus_dm;
  // The cost parameters carry an exact observational-equivalence family
  // (A, E, k) -> (A s^{1-a}, E/s, k s): free entry scales the bank measure
  // against per-bank size, and every targeted moment is an aggregate ratio.
  // Holding the entry cost fixed anchors that scale; disable only with a
  // scale-sensitive custom target.
  bool fix_entry_cost = true;
};

struct CalibrationResult {
  ModelParams params;
  double objective = 0.0;
  Moments moments;
  std::vector<std::pair<std::string, double>> residuals;  // relative, weighted targets
  std::vector<std::string> log;
  int best_start = -1;
};

namespace detail {

inline std::array<double, 7> pack(const ModelParams& mp) {
  return {mp.prefs.theta, mp.costs.A, mp.prefs.B, mp.prefs.b,
          mp.costs.k, mp.costs.E, mp.sigma1};
}

inline ModelParams unpack(const std::array<double, 7>& x, double a_fixed,
                          double sigma3_fixed) {
  return ModelParams(Preferences(x[2], x[3], x[0]),
                     BankCostParams(x[1], a_fixed, x[5], x[4]),
                     x[6], sigma3_fixed);
}

}  // namespace detail

// Moment-matching calibration: minimizes the weighted sum of squared
// relative deviations by multi-start Nelder-Mead inside box bounds. The
// regime boundary makes the moment map piecewise smooth, which is why the
// search is derivative free with restarts. Deterministic for a fixed seed.
inline CalibrationResult calibrate(const CalibrationSpec& spec) {
  const double a_fixed = spec.start.costs.a;
  const double sigma3_fixed = spec.start.sigma3;

  // Keep sigma1 + sigma3 inside the simplex.
  ParamBounds bounds = spec.bounds;
  bounds.hi[6] = std::min(bounds.hi[6], 1.0 - sigma3_fixed - 0.01);
  if (!(bounds.lo[6] < bounds.hi[6]))
    throw DomainError("calibrate: sigma1 box is empty given sigma3");

  // Weighted targets, sorted by name so the objective is invariant to the
  // order in which targets are supplied.
  std::vector<Target> targets;
  for (const Target& t : spec.targets)
    if (t.weight != 0.0) targets.push_back(t);
  std::sort(targets.begin(), targets.end(),
            [](const Target& a, const Target& b) { return a.name < b.name; });
  if (targets.empty()) throw DomainError("calibrate: no weighted targets");

  // Indices into the packed vector {theta, A, B, b, k, E, sigma1}; the
  // entry cost (index 4) drops out under the scale normalization.
  std::vector<std::size_t> free_idx{0, 1, 2, 3, 4, 5, 6};
  if (spec.fix_entry_cost) free_idx = {0, 1, 2, 3, 5, 6};
  const std::array<double, 7> x_full0 = detail::pack(spec.start);

  auto expand = [&](const std::vector<double>& xv) {
    std::array<double, 7> x = x_full0;
    for (std::size_t d = 0; d < free_idx.size(); ++d) x[free_idx[d]] = xv[d];
    return x;
  };

  auto objective = [&](const std::vector<double>& xv) {
    const std::array<double, 7> x = expand(xv);
    try {
      const ModelParams mp = detail::unpack(x, a_fixed, sigma3_fixed);
      const Moments m = model_moments(mp, spec.scenario, spec.ydef);
      double acc = 0.0;
      for (const Target& t : targets) {
        const std::optional<double> value = m.by_name(t.name);
        if (!value) continue;  // undefined moments drop out of the objective
        const double denom = std::max(std::abs(t.value), 1e-12);
        const double rel = (*value - t.value) / denom;
        acc += t.weight * rel * rel;
      }
      return acc;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::infinity();
    } catch (const SolverError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::vector<double> x0, lo, hi;
  for (std::size_t d : free_idx) {
    x0.push_back(x_full0[d]);
    lo.push_back(bounds.lo[d]);
    hi.push_back(bounds.hi[d]);
  }

  SimplexOptions nm;
  nm.max_iter = spec.options.max_iter;
  nm.restarts = spec.options.restarts;

  CalibrationResult result{spec.start, 0.0, {}, {}, {}, -1};
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> best_x = x0;

  for (int s = 0; s < spec.options.starts; ++s) {
    std::vector<double> start = x0;
    if (s > 0) {
      std::mt19937_64 rng(spec.options.seed + static_cast<unsigned>(s));
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      for (std::size_t d = 0; d < start.size(); ++d)
        start[d] = std::clamp(start[d] * (1.0 + spec.options.spread * unif(rng)),
                              lo[d], hi[d]);
    }
    const SimplexResult r = nelder_mead(objective, start, lo, hi, nm);
    std::ostringstream line;
    line << "start " << s << ": objective " << r.f << " after " << r.evals
         << " evaluations";
    result.log.push_back(line.str());
    if (r.f < best_f) {
      best_f = r.f;
      best_x = r.x;
      result.best_start = s;
    }
  }
  if (!std::isfinite(best_f))
    throw DomainError("calibrate: no start produced a solvable scenario");

  result.params = detail::unpack(expand(best_x), a_fixed, sigma3_fixed);
  result.objective = best_f;
  result.moments = model_moments(result.params, spec.scenario, spec.ydef);
  for (const Target& t : targets) {
    const std::optional<double> value = result.moments.by_name(t.name);
    const double denom = std::max(std::abs(t.value), 1e-12);
    result.residuals.emplace_back(
        t.name, value ? (*value - t.value) / denom
                      : std::numeric_limits<double>::quiet_NaN());
  }
  return result;
}

}  // namespace frbank
