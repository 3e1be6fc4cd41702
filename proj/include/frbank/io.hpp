#pragma once

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "frbank/aggregates.hpp"
#include "frbank/calibration.hpp"

namespace frbank {

// Shortest decimal representation that parses back to the identical double,
// keeping emitted files diff-stable and lossless.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& field, int line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw DomainError("line " + std::to_string(line) + ": '" + field +
                      "' is not a number");
  return v;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline constexpr const char* kScenarioHeader = "period,i,i_r,chi,uc_over_y";

inline std::vector<ScenarioRow> load_scenario(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw DomainError("scenario: empty file, expected header '" +
                      std::string(kScenarioHeader) + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kScenarioHeader)
    throw DomainError("scenario: header must be '" +
                      std::string(kScenarioHeader) + "', got '" + line + "'");
  std::vector<ScenarioRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5)
      throw DomainError("line " + std::to_string(lineno) +
                        ": expected 5 columns, got " +
                        std::to_string(fields.size()));
    ScenarioRow row;
    row.period = fields[0];
    row.i = parse_double(fields[1], lineno);
    row.i_r = parse_double(fields[2], lineno);
    row.chi = parse_double(fields[3], lineno);
    row.uc_over_y_obs = parse_double(fields[4], lineno);
    if (!(row.i >= 0.0))
      throw DomainError("line " + std::to_string(lineno) + ": i must be >= 0");
    if (!(row.i_r >= 0.0))
      throw DomainError("line " + std::to_string(lineno) + ": i_r must be >= 0");
    if (!(row.chi > 0.0) || !(row.chi <= 1.0))
      throw DomainError("line " + std::to_string(lineno) +
                        ": chi must lie in (0,1]");
    if (!(row.uc_over_y_obs >= 0.0))
      throw DomainError("line " + std::to_string(lineno) +
                        ": uc_over_y must be >= 0");
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<ScenarioRow> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scenario file: " + path);
  return load_scenario(in);
}

inline void save_scenario(std::ostream& out, const std::vector<ScenarioRow>& rows) {
  out << kScenarioHeader << "\n";
  for (const ScenarioRow& r : rows) {
    out << r.period << ',' << format_double(r.i) << ',' << format_double(r.i_r)
        << ',' << format_double(r.chi) << ',' << format_double(r.uc_over_y_obs)
        << "\n";
  }
}

inline constexpr const char* kTargetsHeader = "name,value,weight";

inline std::vector<Target> load_targets(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      (line != kTargetsHeader && line != std::string(kTargetsHeader) + "\r"))
    throw DomainError("targets: header must be '" +
                      std::string(kTargetsHeader) + "'");
  std::vector<Target> targets;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3)
      throw DomainError("line " + std::to_string(lineno) +
                        ": expected 3 columns");
    targets.push_back({fields[0], parse_double(fields[1], lineno),
                       parse_double(fields[2], lineno)});
  }
  return targets;
}

inline std::vector<Target> load_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open targets file: " + path);
  return load_targets(in);
}

// Flat key=value configuration. Defaults carry the benchmark calibration;
// unknown keys are rejected so typos cannot silently pass.
struct Config {
  double theta = 0.454;
  double B = 0.825;
  double b = 0.398;
  double A = 0.0017;
  double a = 1.2;
  double E = 0.001;
  double k = 0.0011;
  double sigma1 = 0.187;
  double sigma3 = 0.69;
  OutputDefinition output_definition = OutputDefinition::b_plus_dm;
  BuyerShare welfare_share = BuyerShare::printed;
  double backout_tol = 1e-9;
  int calib_starts = 16;
  unsigned calib_seed = 7001;
  double calib_spread = 0.2;
  int calib_max_iter = 4000;
  int calib_restarts = 3;
  bool calib_fix_k = true;  // bank-scale normalization

  ModelParams model_params() const {
    return ModelParams(Preferences(B, b, theta), BankCostParams(A, a, E, k),
                       sigma1, sigma3);
  }

  CalibrationOptions calibration_options() const {
    CalibrationOptions o;
    o.starts = calib_starts;
    o.seed = calib_seed;
    o.spread = calib_spread;
    o.max_iter = calib_max_iter;
    o.restarts = calib_restarts;
    return o;
  }
};

inline Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t'))
      ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "theta") cfg.theta = parse_double(value, lineno);
    else if (key == "B") cfg.B = parse_double(value, lineno);
    else if (key == "b") cfg.b = parse_double(value, lineno);
    else if (key == "A") cfg.A = parse_double(value, lineno);
    else if (key == "a") cfg.a = parse_double(value, lineno);
    else if (key == "E") cfg.E = parse_double(value, lineno);
    else if (key == "k") cfg.k = parse_double(value, lineno);
    else if (key == "sigma1") cfg.sigma1 = parse_double(value, lineno);
    else if (key == "sigma3") cfg.sigma3 = parse_double(value, lineno);
    else if (key == "backout_tol") cfg.backout_tol = parse_double(value, lineno);
    else if (key == "calib_starts")
      cfg.calib_starts = static_cast<int>(parse_double(value, lineno));
    else if (key == "calib_seed")
      cfg.calib_seed = static_cast<unsigned>(parse_double(value, lineno));
    else if (key == "calib_spread") cfg.calib_spread = parse_double(value, lineno);
    else if (key == "calib_max_iter")
      cfg.calib_max_iter = static_cast<int>(parse_double(value, lineno));
    else if (key == "calib_restarts")
      cfg.calib_restarts = static_cast<int>(parse_double(value, lineno));
    else if (key == "calib_fix_k") {
      if (value == "true") cfg.calib_fix_k = true;
      else if (value == "false") cfg.calib_fix_k = false;
      else
        throw DomainError("config line " + std::to_string(lineno) +
                          ": calib_fix_k must be true or false");
    } else if (key == "output_definition") {
      if (value == "b_plus_dm") cfg.output_definition = OutputDefinition::b_plus_dm;
      else if (value == "unit_plus_dm")
        cfg.output_definition = OutputDefinition::unit_plus_dm;
      else
        throw DomainError("config line " + std::to_string(lineno) +
                          ": output_definition must be b_plus_dm or unit_plus_dm");
    } else if (key == "welfare_share") {
      if (value == "printed") cfg.welfare_share = BuyerShare::printed;
      else if (value == "kalai") cfg.welfare_share = BuyerShare::kalai;
      else
        throw DomainError("config line " + std::to_string(lineno) +
                          ": welfare_share must be printed or kalai");
    } else {
      throw DomainError("config line " + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
  }
  // Construct once so invalid values are rejected at load time.
  (void)cfg.model_params();
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file: " + path);
  return parse_config(in);
}

// Optional-aware CSV cell.
inline std::string csv_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace frbank
