#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "frbank/scenario.hpp"
#include "helpers.hpp"

using namespace frbank;
using testutil::benchmark_costs;
using testutil::benchmark_prefs;

namespace {

ModelParams benchmark_params() {
  return ModelParams(benchmark_prefs(), benchmark_costs(), 0.187, 0.69);
}

}  // namespace

TEST_CASE("series basics") {
  const ModelParams mp = benchmark_params();

  CHECK(run_series(mp, {}).empty());

  // A single row reduces to solve + aggregates at that policy.
  const std::vector<ScenarioRow> one{{"2001", 0.05, 0.0, 0.1, 0.03}};
  const SeriesOutput s = run_series(mp, one);
  REQUIRE(s.size() == 1);
  const double dbar = backout_delta(mp, mp.policy(0.05, 0.0, 0.1, 0.0), 0.03);
  const Equilibrium eq = solve(mp.prefs, mp.costs, mp.policy(0.05, 0.0, 0.1, dbar));
  const AggregateStats agg = aggregates(eq, mp.prefs, mp.costs);
  CHECK(s[0].period == "2001");
  CHECK(s[0].regime == Regime::ScarceReserves);
  CHECK(s[0].zeta == agg.zeta);
  CHECK(s[0].r_over_y == agg.r_over_y);
  CHECK(s[0].delta_bar == dbar);

  // Base composition: currency + required + excess equals the base.
  CHECK_THAT(s[0].base_currency + s[0].base_required + s[0].base_excess,
             Catch::Matchers::WithinAbs(eq.m + eq.r, 1e-10));

  // Pure map: permuting rows permutes records.
  const std::vector<ScenarioRow> rows{{"a", 0.05, 0.0, 0.1, 0.02},
                                      {"b", 0.03, 0.0, 0.12, 0.04},
                                      {"c", 0.07, 0.0, 0.11, 0.01}};
  std::vector<ScenarioRow> rev(rows.rbegin(), rows.rend());
  const SeriesOutput fwd = run_series(mp, rows);
  const SeriesOutput bwd = run_series(mp, rev);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    CHECK(fwd[t].period == bwd[rows.size() - 1 - t].period);
    CHECK(fwd[t].zeta == bwd[rows.size() - 1 - t].zeta);
  }

  // Row failures carry the period label.
  try {
    run_series(mp, {{"1977", 0.05, 0.0, 0.1, 0.9}});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("1977") != std::string::npos);
  }
}

TEST_CASE("counterfactual overrides") {
  const ModelParams mp = benchmark_params();
  const std::vector<ScenarioRow> rows{{"a", 0.05, 0.0, 0.1, 0.02},
                                      {"b", 0.04, 0.0, 0.1, 0.05},
                                      {"c", 0.06, 0.0, 0.1, 0.03}};

  // Pinning the credit limit skips the back-out: identical to feeding a
  // zeroed credit column.
  Overrides ov;
  ov.delta_bar = 0.0;
  const SeriesOutput cf = run_series(mp, rows, ov);
  std::vector<ScenarioRow> zeroed = rows;
  for (ScenarioRow& r : zeroed) r.uc_over_y_obs = 0.0;
  const SeriesOutput direct = run_series(mp, zeroed);
  REQUIRE(cf.size() == direct.size());
  for (std::size_t t = 0; t < cf.size(); ++t) {
    CHECK(cf[t].zeta == direct[t].zeta);
    CHECK(cf[t].delta_bar == 0.0);
    CHECK(cf[t].uc_over_y == 0.0);
  }

  // With no credit and constant policy, the currency-deposit ratio is flat
  // across the scarce segment even though the baseline trends with credit.
  std::vector<ScenarioRow> trend;
  for (int t = 0; t < 6; ++t)
    trend.push_back({"y" + std::to_string(t), 0.05, 0.0, 0.1, 0.01 + 0.012 * t});
  const SeriesOutput base = run_series(mp, trend);
  const SeriesOutput flat = run_series(mp, trend, ov);
  CHECK(*base.back().cd_ratio > *base.front().cd_ratio * 1.05);
  for (const PeriodRecord& r : flat)
    CHECK_THAT(*r.cd_ratio, Catch::Matchers::WithinRel(*flat[0].cd_ratio, 1e-12));

  // A per-period replacement series must match the scenario length.
  Overrides bad;
  bad.chi = std::vector<double>{0.1, 0.1};
  CHECK_THROWS_AS(run_series(mp, rows, bad), DomainError);

  Overrides chi_series;
  chi_series.chi = std::vector<double>{0.1, 0.12, 0.14};
  const SeriesOutput varied = run_series(mp, rows, chi_series);
  CHECK(varied[2].chi == 0.14);
}

TEST_CASE("policy sweeps") {
  const ModelParams mp = benchmark_params();

  // Reserves fall with the nominal rate inside the scarce regime.
  const auto sc = sweep_policy(mp, {0.04, 0.08}, {0.0}, {0.05});
  REQUIRE(sc.size() == 2);
  CHECK(sc[0].regime == Regime::ScarceReserves);
  CHECK(sc[0].reserves > sc[1].reserves);

  // Raising interest on reserves shifts reserve demand up at a fixed rate.
  const auto shift = sweep_policy(mp, {0.05}, {0.0, 0.01}, {0.05});
  CHECK(shift[1].reserves >= shift[0].reserves);

  // A higher credit limit lowers reserves pointwise.
  const auto credit = sweep_policy(mp, {0.05}, {0.0}, {0.0, 0.2});
  CHECK(credit[1].reserves < credit[0].reserves);

  // Singleton grids reduce to a single solve.
  const auto single = sweep_policy(mp, {0.05}, {0.0}, {0.05});
  REQUIRE(single.size() == 1);
  const Equilibrium eq = solve(mp.prefs, mp.costs, mp.policy(0.05, 0.0, 0.1, 0.05));
  CHECK(single[0].reserves == eq.r);

  CHECK_THROWS_AS(sweep_policy(mp, {}, {0.0}, {0.0}), DomainError);
}

TEST_CASE("welfare surface") {
  const ModelParams mp = benchmark_params();

  const auto table = welfare_surface(mp, {0.0, 0.04, 0.08, 0.12, 0.16},
                                     {{0.1, 0.0}, {0.08, 0.0}, {0.1, 0.01}});
  REQUIRE(table.size() == 15);

  // The zero-rate point dominates each environment's curve, and welfare
  // declines monotonically along it.
  for (std::size_t env = 0; env < 3; ++env) {
    for (std::size_t k = 1; k < 5; ++k) {
      CHECK(table[env * 5].total > table[env * 5 + k].total);
      CHECK(table[env * 5 + k - 1].total > table[env * 5 + k].total);
    }
  }

  // Lowering the requirement weakly raises welfare point by point.
  for (std::size_t k = 0; k < 5; ++k)
    CHECK(table[5 + k].total >= table[k].total);

  const auto single = welfare_surface(mp, {0.05}, {{0.1, 0.0}});
  REQUIRE(single.size() == 1);

  CHECK_THROWS_AS(welfare_surface(mp, {}, {{0.1, 0.0}}), DomainError);
}

TEST_CASE("model-implied regressions") {
  const ModelParams mp = benchmark_params();

  // Credit expands while rates wander: reserves load negatively on credit.
  std::vector<ScenarioRow> rows;
  const double rates[] = {0.05, 0.06, 0.07, 0.065, 0.05, 0.045,
                          0.05, 0.055, 0.06, 0.05, 0.04, 0.045};
  for (int t = 0; t < 12; ++t)
    rows.push_back({"y" + std::to_string(t), rates[t], 0.0, 0.1,
                    0.010 + 0.004 * t});
  const SeriesOutput series = run_series(mp, rows);
  const RegressionResult r = regress_reserves_on_credit(series);
  CHECK(r.coef[1] < 0.0);  // credit ratio
  CHECK(r.coef[2] < 0.0);  // nominal rate (percent)

  // Constant-policy series leave zero-variance regressors.
  std::vector<ScenarioRow> flat(8, {"x", 0.05, 0.0, 0.1, 0.03});
  const SeriesOutput fs = run_series(mp, flat);
  CHECK_THROWS_AS(regress_reserves_on_credit(fs), DomainError);
}
