// Command-line front end for the monetary-search banking toolkit.
//
// Exit codes: 0 success, 1 invalid input or infeasible request,
// 2 internal solver inconsistency.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "frbank/frbank.hpp"

namespace {

using namespace frbank;

// Grid syntax: either "lo:hi:count" (inclusive endpoints) or a comma list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string::npos)
      throw DomainError("grid '" + text + "': expected lo:hi:count");
    const double lo = parse_double(text.substr(0, a), 0);
    const double hi = parse_double(text.substr(a + 1, b - a - 1), 0);
    const double count_raw = parse_double(text.substr(b + 1), 0);
    const int count = static_cast<int>(count_raw);
    if (count < 1 || count != count_raw)
      throw DomainError("grid '" + text + "': count must be a positive integer");
    if (count == 1) return {lo};
    for (int k = 0; k < count; ++k)
      values.push_back(lo + (hi - lo) * k / (count - 1));
    return values;
  }
  for (const std::string& field : split_csv(text))
    values.push_back(parse_double(field, 0));
  if (values.empty()) throw DomainError("grid '" + text + "' is empty");
  return values;
}

struct OutputTarget {
  std::string path;  // empty for stdout

  void write(const std::string& content) const {
    if (path.empty()) {
      std::cout << content;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file: " + path);
    out << content;
  }
};

std::string solve_csv(const Config& cfg, double i, double i_r, double chi,
                      double dbar) {
  const ModelParams mp = cfg.model_params();
  const Equilibrium eq = solve(mp.prefs, mp.costs, mp.policy(i, i_r, chi, dbar));
  const AggregateStats s = aggregates(eq, mp.prefs, mp.costs, cfg.output_definition);
  const WelfareReport w = welfare(eq, mp.prefs, cfg.welfare_share);
  std::ostringstream out;
  out << "regime,i,i_r,chi,delta_bar,i_d,i_l,lambda_l,n,r_tilde,l_tilde,"
         "m,r,l,delta_hat,zeta,cd_ratio,excess,excess_ratio,y,c_over_y,"
         "r_over_y,uc_over_y,uc_over_dm,markup,pi_over_y,welfare\n";
  out << to_string(eq.regime) << ',' << format_double(i) << ','
      << format_double(i_r) << ',' << format_double(chi) << ','
      << format_double(dbar) << ',' << format_double(eq.bank.i_d) << ','
      << format_double(eq.bank.i_l) << ',' << format_double(eq.bank.lambda_L)
      << ',' << format_double(eq.bank.n) << ',' << format_double(eq.bank.r_tilde)
      << ',' << format_double(eq.bank.l_tilde) << ',' << format_double(eq.m)
      << ',' << format_double(eq.r) << ',' << format_double(eq.l) << ','
      << format_double(eq.delta_hat) << ',' << format_double(s.zeta) << ','
      << csv_cell(s.cd_ratio) << ',' << format_double(s.excess) << ','
      << csv_cell(s.excess_ratio) << ',' << format_double(s.y) << ','
      << format_double(s.c_over_y) << ',' << format_double(s.r_over_y) << ','
      << format_double(s.uc_over_y) << ',' << format_double(s.uc_over_dm) << ','
      << csv_cell(s.markup) << ',' << format_double(s.pi_over_y) << ','
      << format_double(w.total) << "\n";
  return out.str();
}

std::string thresholds_csv(const Config& cfg, double i_r, double chi) {
  const Thresholds t = thresholds(cfg.model_params().costs, i_r, chi);
  std::ostringstream out;
  out << "i_r,chi,r_hat,r_lower,gamma_prime_r_hat,i_hat,i_bar,i_lower\n";
  out << format_double(i_r) << ',' << format_double(chi) << ','
      << format_double(t.r_hat) << ',' << format_double(t.r_lower) << ','
      << format_double(t.gamma_prime_r_hat) << ',' << format_double(t.i_hat)
      << ',' << format_double(t.i_bar) << ',' << format_double(t.i_lower)
      << "\n";
  return out.str();
}

std::string series_csv(const SeriesOutput& series) {
  std::ostringstream out;
  out << "period,i,i_r,chi,delta_bar,regime,uc_over_y,zeta,cd_ratio,"
         "excess_ratio,r_over_y,c_over_y,base_currency,base_required,"
         "base_excess,welfare\n";
  for (const PeriodRecord& r : series) {
    out << r.period << ',' << format_double(r.i) << ',' << format_double(r.i_r)
        << ',' << format_double(r.chi) << ',' << format_double(r.delta_bar)
        << ',' << to_string(r.regime) << ',' << format_double(r.uc_over_y)
        << ',' << format_double(r.zeta) << ',' << csv_cell(r.cd_ratio) << ','
        << csv_cell(r.excess_ratio) << ',' << format_double(r.r_over_y) << ','
        << format_double(r.c_over_y) << ',' << format_double(r.base_currency)
        << ',' << format_double(r.base_required) << ','
        << format_double(r.base_excess) << ',' << format_double(r.welfare_total)
        << "\n";
  }
  return out.str();
}

std::string regression_csv(const std::string& name, const RegressionResult& r,
                           const std::vector<std::string>& terms) {
  std::ostringstream out;
  out << "regression,term,coefficient,std_error,r_squared,adj_r_squared\n";
  for (std::size_t c = 0; c < r.coef.size(); ++c) {
    out << name << ',' << terms[c] << ',' << format_double(r.coef[c]) << ','
        << format_double(r.se[c]) << ',' << format_double(r.r2) << ','
        << format_double(r.adj_r2) << "\n";
  }
  return out.str();
}

// key=value or key=@series.csv (header "period,value", one row per period).
Overrides parse_overrides(const std::vector<std::string>& specs,
                          std::size_t n_rows) {
  Overrides ov;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw DomainError("override '" + spec + "': expected key=value");
    const std::string key = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    Overrides::Value parsed;
    if (!value.empty() && value[0] == '@') {
      std::ifstream in(value.substr(1));
      if (!in) throw DomainError("cannot open override series: " + value.substr(1));
      std::string line;
      if (!std::getline(in, line) ||
          (line != "period,value" && line != "period,value\r"))
        throw DomainError("override series must start with 'period,value'");
      std::vector<double> series;
      int lineno = 1;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2)
          throw DomainError("override series line " + std::to_string(lineno) +
                            ": expected 2 columns");
        series.push_back(parse_double(fields[1], lineno));
      }
      if (series.size() != n_rows)
        throw DomainError("override series has " + std::to_string(series.size()) +
                          " rows; scenario has " + std::to_string(n_rows));
      parsed = std::move(series);
    } else {
      parsed = parse_double(value, 0);
    }
    if (key == "i") ov.i = parsed;
    else if (key == "i_r") ov.i_r = parsed;
    else if (key == "chi") ov.chi = parsed;
    else if (key == "delta_bar") ov.delta_bar = parsed;
    else
      throw DomainError("override key must be one of i, i_r, chi, delta_bar");
  }
  return ov;
}

std::string calibrate_report(const CalibrationResult& fit) {
  std::ostringstream out;
  out << "# fitted parameters (config-compatible)\n";
  out << "theta=" << format_double(fit.params.prefs.theta) << "\n";
  out << "B=" << format_double(fit.params.prefs.B) << "\n";
  out << "b=" << format_double(fit.params.prefs.b) << "\n";
  out << "A=" << format_double(fit.params.costs.A) << "\n";
  out << "a=" << format_double(fit.params.costs.a) << "\n";
  out << "E=" << format_double(fit.params.costs.E) << "\n";
  out << "k=" << format_double(fit.params.costs.k) << "\n";
  out << "sigma1=" << format_double(fit.params.sigma1) << "\n";
  out << "sigma3=" << format_double(fit.params.sigma3) << "\n";
  out << "# diagnostics\n";
  out << "# objective=" << format_double(fit.objective) << "\n";
  out << "# best_start=" << fit.best_start << "\n";
  for (const auto& [name, residual] : fit.residuals)
    out << "# residual " << name << "=" << format_double(residual) << "\n";
  for (const std::string& line : fit.log) out << "# " << line << "\n";
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stationary-equilibrium solver and simulator for a "
               "monetary-search economy with fractional-reserve banking"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value configuration file")
      ->check(CLI::ExistingFile);

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "solve one policy point");
  double arg_i = 0.0, arg_ir = 0.0, arg_chi = 0.1, arg_dbar = 0.0;
  std::string out_path;
  cmd_solve->add_option("--i", arg_i, "nominal interest rate")->required();
  cmd_solve->add_option("--ir", arg_ir, "interest on reserves")->required();
  cmd_solve->add_option("--chi", arg_chi, "reserve requirement")->required();
  cmd_solve->add_option("--delta-bar", arg_dbar, "unsecured credit limit");
  cmd_solve->add_option("--out", out_path, "output file (default stdout)");

  // thresholds
  auto* cmd_thr = app.add_subcommand("thresholds", "regime thresholds");
  double thr_ir = 0.0, thr_chi = 0.1;
  cmd_thr->add_option("--ir", thr_ir, "interest on reserves")->required();
  cmd_thr->add_option("--chi", thr_chi, "reserve requirement")->required();
  cmd_thr->add_option("--out", out_path, "output file (default stdout)");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "demand-curve table");
  std::string sweep_i = "0.005:0.16:32", sweep_ir = "0", sweep_db = "0";
  double sweep_chi = 0.1;
  cmd_sweep->add_option("--i-grid", sweep_i, "rate grid lo:hi:count or list");
  cmd_sweep->add_option("--ir-list", sweep_ir, "interest-on-reserves values");
  cmd_sweep->add_option("--delta-bar-list", sweep_db, "credit-limit values");
  cmd_sweep->add_option("--chi", sweep_chi, "reserve requirement");
  cmd_sweep->add_option("--out", out_path, "output file (default stdout)");

  // welfare
  auto* cmd_wel = app.add_subcommand("welfare", "welfare over rate grids");
  std::string wel_i = "0:0.16:17", wel_chi = "0.1", wel_ir = "0";
  double wel_dbar = 0.0;
  cmd_wel->add_option("--i-grid", wel_i, "rate grid lo:hi:count or list");
  cmd_wel->add_option("--chi-list", wel_chi, "requirement per environment");
  cmd_wel->add_option("--ir-list", wel_ir, "interest on reserves per environment");
  cmd_wel->add_option("--delta-bar", wel_dbar, "unsecured credit limit");
  cmd_wel->add_option("--out", out_path, "output file (default stdout)");

  // calibrate
  auto* cmd_cal = app.add_subcommand("calibrate", "fit parameters to targets");
  std::string cal_scenario, cal_targets;
  cmd_cal->add_option("--scenario", cal_scenario, "scenario CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_cal->add_option("--targets", cal_targets, "targets CSV (name,value,weight)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_cal->add_option("--out", out_path, "output file (default stdout)");

  // simulate
  auto* cmd_sim = app.add_subcommand("simulate", "solve a historical scenario");
  std::string sim_scenario;
  cmd_sim->add_option("--scenario", sim_scenario, "scenario CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_sim->add_option("--out", out_path, "output file (default stdout)");

  // counterfactual
  auto* cmd_cf = app.add_subcommand("counterfactual",
                                    "simulate with policy overrides");
  std::string cf_scenario;
  std::vector<std::string> cf_overrides;
  cmd_cf->add_option("--scenario", cf_scenario, "scenario CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_cf->add_option("--override", cf_overrides,
                     "key=value or key=@series.csv (repeatable)");
  cmd_cf->add_option("--out", out_path, "output file (default stdout)");

  // regress
  auto* cmd_reg = app.add_subcommand("regress",
                                     "model-implied regressions on a scenario");
  std::string reg_scenario, reg_spec = "reserves", reg_chow;
  int reg_lag = 1;
  cmd_reg->add_option("--scenario", reg_scenario, "scenario CSV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_reg->add_option("--spec", reg_spec,
                      "reserves | multiplier | excess");
  cmd_reg->add_option("--lag", reg_lag, "HAC lag (default 1)");
  cmd_reg->add_option("--chow", reg_chow,
                      "structural break test: ycol:xcol:break1[,break2...] "
                      "(breaks are row indices)");
  cmd_reg->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    const ModelParams mp = cfg.model_params();
    const OutputTarget target{out_path};

    if (cmd_solve->parsed()) {
      target.write(solve_csv(cfg, arg_i, arg_ir, arg_chi, arg_dbar));
    } else if (cmd_thr->parsed()) {
      target.write(thresholds_csv(cfg, thr_ir, thr_chi));
    } else if (cmd_sweep->parsed()) {
      const auto table = sweep_policy(mp, parse_grid(sweep_i),
                                      parse_grid(sweep_ir), parse_grid(sweep_db),
                                      sweep_chi, cfg.output_definition);
      std::ostringstream out;
      out << "i,i_r,delta_bar,regime,reserves,aggregate,zeta\n";
      for (const SweepRecord& r : table) {
        out << format_double(r.i) << ',' << format_double(r.i_r) << ','
            << format_double(r.delta_bar) << ',' << to_string(r.regime) << ','
            << format_double(r.reserves) << ',' << format_double(r.aggregate)
            << ',' << format_double(r.zeta) << "\n";
      }
      target.write(out.str());
    } else if (cmd_wel->parsed()) {
      const auto chis = parse_grid(wel_chi);
      const auto irs = parse_grid(wel_ir);
      if (chis.size() != irs.size())
        throw DomainError("welfare: --chi-list and --ir-list must pair up");
      std::vector<std::pair<double, double>> pairs;
      for (std::size_t p = 0; p < chis.size(); ++p)
        pairs.emplace_back(chis[p], irs[p]);
      const auto table = welfare_surface(mp, parse_grid(wel_i), pairs, wel_dbar,
                                         cfg.welfare_share);
      std::ostringstream out;
      out << "i,chi,i_r,total,jb1,jb2,jb3,js1,js2,js3,dispersion\n";
      for (const WelfareRecord& r : table) {
        out << format_double(r.i) << ',' << format_double(r.chi) << ','
            << format_double(r.i_r) << ',' << format_double(r.total) << ','
            << format_double(r.jb[0]) << ',' << format_double(r.jb[1]) << ','
            << format_double(r.jb[2]) << ',' << format_double(r.js[0]) << ','
            << format_double(r.js[1]) << ',' << format_double(r.js[2]) << ','
            << format_double(r.dispersion) << "\n";
      }
      target.write(out.str());
    } else if (cmd_cal->parsed()) {
      CalibrationSpec spec{mp, load_targets(cal_targets),
                           load_scenario(cal_scenario), {},
                           cfg.calibration_options(), cfg.output_definition,
                           cfg.calib_fix_k};
      target.write(calibrate_report(calibrate(spec)));
    } else if (cmd_sim->parsed()) {
      target.write(series_csv(run_series(mp, load_scenario(sim_scenario), {},
                                         cfg.output_definition,
                                         cfg.welfare_share)));
    } else if (cmd_cf->parsed()) {
      const auto scenario = load_scenario(cf_scenario);
      const Overrides ov = parse_overrides(cf_overrides, scenario.size());
      target.write(series_csv(run_series(mp, scenario, ov,
                                         cfg.output_definition,
                                         cfg.welfare_share)));
    } else if (cmd_reg->parsed()) {
      const auto scenario = load_scenario(reg_scenario);
      const SeriesOutput series = run_series(mp, scenario, {},
                                             cfg.output_definition,
                                             cfg.welfare_share);
      if (!reg_chow.empty()) {
        // ycol:xcol:breaks over the simulated series columns.
        const auto c1 = reg_chow.find(':');
        const auto c2 = reg_chow.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
          throw DomainError("--chow expects ycol:xcol:break1[,break2...]");
        const std::string ycol = reg_chow.substr(0, c1);
        const std::string xcol = reg_chow.substr(c1 + 1, c2 - c1 - 1);
        auto column = [&](const std::string& name) {
          std::vector<double> v;
          for (const PeriodRecord& r : series) {
            if (name == "zeta") v.push_back(r.zeta);
            else if (name == "cd_ratio")
              v.push_back(r.cd_ratio ? *r.cd_ratio : 0.0);
            else if (name == "excess_ratio")
              v.push_back(r.excess_ratio ? *r.excess_ratio : 0.0);
            else if (name == "r_over_y") v.push_back(r.r_over_y);
            else if (name == "c_over_y") v.push_back(r.c_over_y);
            else if (name == "uc_over_y") v.push_back(r.uc_over_y);
            else if (name == "i") v.push_back(r.i * kRatePercent);
            else if (name == "i_r") v.push_back(r.i_r * kRatePercent);
            else if (name == "chi") v.push_back(r.chi);
            else
              throw DomainError("unknown series column: " + name);
          }
          return v;
        };
        std::vector<std::size_t> breaks;
        for (const std::string& f : split_csv(reg_chow.substr(c2 + 1)))
          breaks.push_back(static_cast<std::size_t>(parse_double(f, 0)));
        const ChowResult c = chow_f(column(ycol), {column(xcol)}, breaks);
        std::ostringstream out;
        out << "f_stat,q,df_denom,rss_restricted,rss_unrestricted\n";
        out << format_double(c.f) << ',' << c.q << ',' << c.df_denom << ','
            << format_double(c.rss_restricted) << ','
            << format_double(c.rss_unrestricted) << "\n";
        target.write(out.str());
      } else if (reg_spec == "reserves") {
        target.write(regression_csv("reserves_on_credit",
                                    regress_reserves_on_credit(series, reg_lag),
                                    {"intercept", "uc_over_y", "rate_pct"}));
      } else if (reg_spec == "multiplier") {
        target.write(regression_csv("multiplier_on_rates",
                                    regress_multiplier_on_rates(series, reg_lag),
                                    {"intercept", "rate_pct", "ior_pct"}));
      } else if (reg_spec == "excess") {
        target.write(regression_csv("excess_on_rates",
                                    regress_excess_on_rates(series, reg_lag),
                                    {"intercept", "rate_pct", "ior_pct"}));
      } else {
        throw DomainError("--spec must be reserves, multiplier, or excess");
      }
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
