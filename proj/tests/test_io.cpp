#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "frbank/io.hpp"

using namespace frbank;

TEST_CASE("scenario parsing") {
  std::istringstream in(
      "period,i,i_r,chi,uc_over_y\n"
      "1968,0.054,0,0.16,0.004\n"
      "1969,0.066,0,0.16,0.005\n"
      "1970,0.064,0,0.155,0.006\n");
  const auto rows = load_scenario(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].period == "1968");
  CHECK(rows[1].i == 0.066);
  CHECK(rows[2].chi == 0.155);

  // Violated row invariants name the line.
  std::istringstream bad(
      "period,i,i_r,chi,uc_over_y\n"
      "1968,0.05,0,0.1,0.01\n"
      "1969,0.05,0,0,0.01\n");
  try {
    load_scenario(bad);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }

  std::istringstream nonnum(
      "period,i,i_r,chi,uc_over_y\n"
      "1968,abc,0,0.1,0.01\n");
  try {
    load_scenario(nonnum);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::istringstream missing("period,i,i_r,chi\n");
  CHECK_THROWS_AS(load_scenario(missing), DomainError);
}

TEST_CASE("scenario round trip is lossless") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ScenarioRow> rows;
  for (int t = 0; t < 40; ++t) {
    ScenarioRow r;
    r.period = "y" + std::to_string(t);
    r.i = 0.16 * unif(rng);
    r.i_r = 0.05 * unif(rng);
    r.chi = 0.05 + 0.9 * unif(rng);
    r.uc_over_y_obs = 0.1 * unif(rng);
    rows.push_back(r);
  }
  std::ostringstream out;
  save_scenario(out, rows);
  std::istringstream in(out.str());
  const auto back = load_scenario(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t t = 0; t < rows.size(); ++t) {
    CHECK(back[t].i == rows[t].i);
    CHECK(back[t].i_r == rows[t].i_r);
    CHECK(back[t].chi == rows[t].chi);
    CHECK(back[t].uc_over_y_obs == rows[t].uc_over_y_obs);
  }

  // And writing again produces identical bytes.
  std::ostringstream out2;
  save_scenario(out2, back);
  CHECK(out.str() == out2.str());
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# benchmark with one tweak\n"
      "theta=0.5\n"
      "sigma1=0.2\n"
      "output_definition=unit_plus_dm\n"
      "welfare_share=kalai\n"
      "calib_starts=8\n");
  const Config cfg = parse_config(in);
  CHECK(cfg.theta == 0.5);
  CHECK(cfg.sigma1 == 0.2);
  CHECK(cfg.B == 0.825);  // untouched defaults stay at the benchmark
  CHECK(cfg.output_definition == OutputDefinition::unit_plus_dm);
  CHECK(cfg.welfare_share == BuyerShare::kalai);
  CHECK(cfg.calib_starts == 8);

  std::istringstream unknown("thtea=0.5\n");
  try {
    parse_config(unknown);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("unknown key 'thtea'") != std::string::npos);
  }

  // Values must pass the owning types' validation at load time.
  std::istringstream invalid("b=1.5\n");
  CHECK_THROWS_AS(parse_config(invalid), DomainError);
}

TEST_CASE("targets parsing") {
  std::istringstream in(
      "name,value,weight\n"
      "markup,1.384,1\n"
      "semi_elasticity,-3.712,1\n"
      "pi_over_deposits,0.01,0\n");
  const auto targets = load_targets(in);
  REQUIRE(targets.size() == 3);
  CHECK(targets[0].name == "markup");
  CHECK(targets[1].value == -3.712);
  CHECK(targets[2].weight == 0.0);
}

TEST_CASE("number formatting round trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double v = std::ldexp(unif(rng), k % 60 - 30);
    CHECK(parse_double(format_double(v), 0) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
}
