#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "frbank/equilibrium.hpp"
#include "frbank/preferences.hpp"

namespace frbank {

// Output definition: the DM transaction volume plus either the DM utility
// scale B (the literal definition) or the normalized CM output X* = 1
// (sensitivity switch; B in that position is plausibly in error).
enum class OutputDefinition { b_plus_dm, unit_plus_dm };

struct AggregateStats {
  double m0 = 0.0;    // monetary base m + r
  double m1 = 0.0;    // broad money m + r + l
  double zeta = 1.0;  // money multiplier m1/m0
  std::optional<double> cd_ratio;      // currency / deposits, absent when r+l=0
  double excess = 0.0;                 // excess reserves r - chi (r+l)
  std::optional<double> excess_ratio;  // excess / (r+l), absent when r+l=0
  double y = 0.0;                      // model output
  double c_over_y = 0.0;
  double r_over_y = 0.0;
  double uc_over_y = 0.0;
  double uc_over_dm = 0.0;
  std::optional<double> markup;  // payment over marginal cost, absent if no trade
  double pi_over_y = 0.0;        // bank net income n*k over output
  double pi_over_deposits = 0.0; // bank net income over deposits, 0 if none
};

inline AggregateStats aggregates(const Equilibrium& eq, const Preferences& prefs,
                                 const BankCostParams& costs,
                                 OutputDefinition ydef = OutputDefinition::b_plus_dm) {
  const PolicyPoint& p = eq.policy;
  AggregateStats s;
  const double dm = p.sigma1 * eq.meetings[0].z + p.sigma2 * eq.meetings[1].z +
                    p.sigma3 * eq.meetings[2].z;
  s.y = (ydef == OutputDefinition::b_plus_dm ? prefs.B : 1.0) + dm;
  s.m0 = eq.m + eq.r;
  s.m1 = eq.m + eq.r + eq.l;
  s.zeta = s.m0 > 0.0 ? s.m1 / s.m0 : std::numeric_limits<double>::quiet_NaN();
  const double deposits = eq.r + eq.l;
  if (deposits > 0.0) {
    s.cd_ratio = eq.m / deposits;
    // The lending constraint binds in the scarce regime, so excess reserves
    // are identically zero there.
    s.excess = eq.regime == Regime::ScarceReserves ? 0.0
                                                   : eq.r - p.chi * deposits;
    s.excess_ratio = s.excess / deposits;
    s.pi_over_deposits = eq.bank.n * costs.k / deposits;
  }
  s.c_over_y = eq.m / s.y;
  s.r_over_y = eq.r / s.y;
  const double uc = p.sigma3 * eq.meetings[2].credit_used;
  s.uc_over_y = uc / s.y;
  s.uc_over_dm = dm > 0.0 ? uc / dm : 0.0;
  double markup_num = 0.0, markup_wgt = 0.0;
  const std::array<double, 3> sigma{p.sigma1, p.sigma2, p.sigma3};
  for (int j = 0; j < 3; ++j) {
    if (eq.meetings[j].q > 0.0 && sigma[j] > 0.0) {
      markup_num += sigma[j] * eq.meetings[j].z / Preferences::c(eq.meetings[j].q);
      markup_wgt += sigma[j];
    }
  }
  if (markup_wgt > 0.0) s.markup = markup_num / markup_wgt;
  s.pi_over_y = eq.bank.n * costs.k / s.y;
  return s;
}

// Buyer trade-surplus share in the welfare measure: the printed formula
// carries (1-theta); the kalai variant assigns the buyer theta.
enum class BuyerShare { printed, kalai };

struct WelfareReport {
  std::array<double, 3> jb{};  // buyer welfare by meeting type
  std::array<double, 3> js{};  // seller welfare by meeting type
  double total = 0.0;          // weighted sum over agents
  double dispersion = 0.0;     // unweighted std dev of the six values
};

inline WelfareReport welfare(const Equilibrium& eq, const Preferences& prefs,
                             BuyerShare share = BuyerShare::printed) {
  const PolicyPoint& p = eq.policy;
  WelfareReport w;
  const double buyer_share = share == BuyerShare::printed ? 1.0 - prefs.theta
                                                          : prefs.theta;
  for (int j = 0; j < 3; ++j) {
    const auto& mt = eq.meetings[j];
    const double surplus =
        mt.q > 0.0 ? prefs.u(mt.q) - Preferences::c(mt.q) : 0.0;
    w.js[j] = (1.0 - prefs.theta) * surplus;
    w.jb[j] = -p.i * mt.m - (p.i - eq.bank.i_d) * mt.d + buyer_share * surplus;
  }
  const std::array<double, 3> sigma{p.sigma1, p.sigma2, p.sigma3};
  for (int j = 0; j < 3; ++j) w.total += sigma[j] * (w.jb[j] + w.js[j]);
  double mean = 0.0;
  for (int j = 0; j < 3; ++j) mean += w.jb[j] + w.js[j];
  mean /= 6.0;
  double var = 0.0;
  for (int j = 0; j < 3; ++j) {
    var += (w.jb[j] - mean) * (w.jb[j] - mean);
    var += (w.js[j] - mean) * (w.js[j] - mean);
  }
  w.dispersion = std::sqrt(var / 6.0);
  return w;
}

}  // namespace frbank
