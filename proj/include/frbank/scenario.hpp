#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "frbank/aggregates.hpp"
#include "frbank/calibration.hpp"
#include "frbank/econometrics.hpp"
#include "frbank/equilibrium.hpp"

namespace frbank {

// One simulated period: the resolved policy inputs and the statistics the
// toolkit reports for the historical and counterfactual runs.
struct PeriodRecord {
  std::string period;
  Regime regime = Regime::NoBanking;
  double i = 0.0;
  double i_r = 0.0;
  double chi = 0.1;
  double delta_bar = 0.0;
  double uc_over_y = 0.0;
  double zeta = 1.0;
  std::optional<double> cd_ratio;
  std::optional<double> excess_ratio;
  double r_over_y = 0.0;
  double c_over_y = 0.0;
  double base_currency = 0.0;  // the three parts sum to the monetary base
  double base_required = 0.0;
  double base_excess = 0.0;
  double welfare_total = 0.0;
};

using SeriesOutput = std::vector<PeriodRecord>;

// Declarative counterfactual overrides: pin a policy input to a constant or
// replace it with a per-period series. An overridden credit limit skips the
// back-out entirely.
struct Overrides {
  using Value = std::variant<double, std::vector<double>>;
  std::optional<Value> i;
  std::optional<Value> i_r;
  std::optional<Value> chi;
  std::optional<Value> delta_bar;
};

namespace detail {

inline double resolve_override(const Overrides::Value& v, std::size_t idx,
                               std::size_t n_rows, const char* name) {
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  const auto& series = std::get<std::vector<double>>(v);
  if (series.size() != n_rows)
    throw DomainError(std::string("override series for ") + name +
                      " has wrong length");
  return series[idx];
}

}  // namespace detail

inline SeriesOutput run_series(const ModelParams& mp,
                               const std::vector<ScenarioRow>& scenario,
                               const Overrides& overrides = {},
                               OutputDefinition ydef = OutputDefinition::b_plus_dm,
                               BuyerShare share = BuyerShare::printed) {
  SeriesOutput out;
  out.reserve(scenario.size());
  const std::size_t n = scenario.size();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const ScenarioRow& row = scenario[idx];
    try {
      const double i =
          overrides.i ? detail::resolve_override(*overrides.i, idx, n, "i") : row.i;
      const double i_r = overrides.i_r
                             ? detail::resolve_override(*overrides.i_r, idx, n, "i_r")
                             : row.i_r;
      const double chi = overrides.chi
                             ? detail::resolve_override(*overrides.chi, idx, n, "chi")
                             : row.chi;
      double dbar;
      if (overrides.delta_bar) {
        dbar = detail::resolve_override(*overrides.delta_bar, idx, n, "delta_bar");
      } else {
        dbar = backout_delta(mp, mp.policy(i, i_r, chi, 0.0), row.uc_over_y_obs,
                             ydef);
      }
      const PolicyPoint p = mp.policy(i, i_r, chi, dbar);
      const Equilibrium eq = solve(mp.prefs, mp.costs, p);
      const AggregateStats s = aggregates(eq, mp.prefs, mp.costs, ydef);

      PeriodRecord rec;
      rec.period = row.period;
      rec.regime = eq.regime;
      rec.i = i;
      rec.i_r = i_r;
      rec.chi = chi;
      rec.delta_bar = dbar;
      rec.uc_over_y = s.uc_over_y;
      rec.zeta = s.zeta;
      rec.cd_ratio = s.cd_ratio;
      rec.excess_ratio = s.excess_ratio;
      rec.r_over_y = s.r_over_y;
      rec.c_over_y = s.c_over_y;
      rec.base_currency = eq.m;
      rec.base_excess = s.excess;
      rec.base_required = eq.r - s.excess;
      rec.welfare_total = welfare(eq, mp.prefs, share).total;
      out.push_back(std::move(rec));
    } catch (const DomainError& e) {
      throw DomainError("run_series: period '" + row.period + "' (i=" +
                        std::to_string(row.i) + ", i_r=" + std::to_string(row.i_r) +
                        ", chi=" + std::to_string(row.chi) + "): " + e.what());
    } catch (const SolverError& e) {
      throw SolverError("run_series: period '" + row.period + "' (i=" +
                        std::to_string(row.i) + ", i_r=" + std::to_string(row.i_r) +
                        ", chi=" + std::to_string(row.chi) + "): " + e.what());
    }
  }
  return out;
}

struct SweepRecord {
  double i = 0.0;
  double i_r = 0.0;
  double delta_bar = 0.0;
  Regime regime = Regime::NoBanking;
  double reserves = 0.0;   // aggregate real reserves
  double aggregate = 0.0;  // m + r + l
  double zeta = 1.0;
};

// Demand-curve table: aggregate reserves and broad money over a grid of
// nominal rates for each (interest-on-reserves, credit-limit) combination.
inline std::vector<SweepRecord> sweep_policy(const ModelParams& mp,
                                             const std::vector<double>& i_grid,
                                             const std::vector<double>& ir_list,
                                             const std::vector<double>& dbar_list,
                                             double chi = 0.1,
                                             OutputDefinition ydef =
                                                 OutputDefinition::b_plus_dm) {
  if (i_grid.empty() || ir_list.empty() || dbar_list.empty())
    throw DomainError("sweep_policy: empty grid");
  std::vector<SweepRecord> out;
  out.reserve(i_grid.size() * ir_list.size() * dbar_list.size());
  for (double i_r : ir_list) {
    for (double dbar : dbar_list) {
      for (double i : i_grid) {
        const Equilibrium eq =
            solve(mp.prefs, mp.costs, mp.policy(i, i_r, chi, dbar));
        const AggregateStats s = aggregates(eq, mp.prefs, mp.costs, ydef);
        out.push_back({i, i_r, dbar, eq.regime, eq.r, s.m1, s.zeta});
      }
    }
  }
  return out;
}

struct WelfareRecord {
  double i = 0.0;
  double chi = 0.1;
  double i_r = 0.0;
  double total = 0.0;
  std::array<double, 3> jb{};
  std::array<double, 3> js{};
  double dispersion = 0.0;
};

// Welfare along rate grids for each (chi, i_r) environment.
inline std::vector<WelfareRecord> welfare_surface(
    const ModelParams& mp, const std::vector<double>& i_grid,
    const std::vector<std::pair<double, double>>& chi_ir_pairs,
    double delta_bar = 0.0, BuyerShare share = BuyerShare::printed) {
  if (i_grid.empty() || chi_ir_pairs.empty())
    throw DomainError("welfare_surface: empty grid");
  std::vector<WelfareRecord> out;
  out.reserve(i_grid.size() * chi_ir_pairs.size());
  for (const auto& [chi, i_r] : chi_ir_pairs) {
    for (double i : i_grid) {
      const Equilibrium eq =
          solve(mp.prefs, mp.costs, mp.policy(i, i_r, chi, delta_bar));
      const WelfareReport w = welfare(eq, mp.prefs, share);
      out.push_back({i, chi, i_r, w.total, w.jb, w.js, w.dispersion});
    }
  }
  return out;
}

// Rate regressors enter in percent so coefficient magnitudes are comparable
// across small annual rate series.
inline constexpr double kRatePercent = 100.0;

// Reserves-to-output on the credit ratio and the nominal rate.
inline RegressionResult regress_reserves_on_credit(const SeriesOutput& series,
                                                   int lag = 1) {
  std::vector<double> y, uc, rate;
  for (const PeriodRecord& r : series) {
    y.push_back(r.r_over_y);
    uc.push_back(r.uc_over_y);
    rate.push_back(r.i * kRatePercent);
  }
  return ols_nw(y, {uc, rate}, lag);
}

// Money multiplier on the nominal rate and interest on reserves.
inline RegressionResult regress_multiplier_on_rates(const SeriesOutput& series,
                                                    int lag = 1) {
  std::vector<double> y, rate, ior;
  for (const PeriodRecord& r : series) {
    y.push_back(r.zeta);
    rate.push_back(r.i * kRatePercent);
    ior.push_back(r.i_r * kRatePercent);
  }
  return ols_nw(y, {rate, ior}, lag);
}

// Excess-reserve ratio on the nominal rate and interest on reserves, over
// the periods with active banks.
inline RegressionResult regress_excess_on_rates(const SeriesOutput& series,
                                                int lag = 1) {
  std::vector<double> y, rate, ior;
  for (const PeriodRecord& r : series) {
    if (!r.excess_ratio) continue;
    y.push_back(*r.excess_ratio);
    rate.push_back(r.i * kRatePercent);
    ior.push_back(r.i_r * kRatePercent);
  }
  return ols_nw(y, {rate, ior}, lag);
}

struct ModelRegressions {
  RegressionResult reserves_credit;
  RegressionResult multiplier_rates;
  RegressionResult excess_rates;
};

// The three model-implied specifications on one simulated series. Zero
// variation in a regressor surfaces as a rank-deficiency error.
inline ModelRegressions model_implied_regressions(const SeriesOutput& series,
                                                  int lag = 1) {
  return {regress_reserves_on_credit(series, lag),
          regress_multiplier_on_rates(series, lag),
          regress_excess_on_rates(series, lag)};
}

}  // namespace frbank
