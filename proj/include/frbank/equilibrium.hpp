#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "frbank/banking.hpp"
#include "frbank/common.hpp"
#include "frbank/policy.hpp"
#include "frbank/preferences.hpp"

namespace frbank {

enum class Regime { NoBanking, ScarceReserves, AmpleReserves };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::NoBanking: return "no_banking";
    case Regime::ScarceReserves: return "scarce";
    case Regime::AmpleReserves: return "ample";
  }
  return "?";
}

// Rate thresholds separating the three regimes at a given (i_r, chi).
struct Thresholds {
  double i_lower;           // i_r - gamma'(r_lower)
  double i_hat;             // deposit rate hits zero under a binding constraint
  double i_bar;             // lending limit exactly binds
  double r_hat;             // per-bank reserves, binding-constraint entry locus
  double r_lower;           // per-bank reserves at zero lending
  double gamma_prime_r_hat;
};

inline Thresholds thresholds(const BankCostParams& costs, double i_r, double chi) {
  if (!(chi > 0.0) || !(chi < 1.0))
    throw DomainError("thresholds: chi must lie in (0,1); chi = 1 is degenerate");
  Thresholds t{};
  t.r_hat = costs.r_hat(chi);
  t.r_lower = costs.r_lower();
  t.gamma_prime_r_hat = costs.gamma_prime(t.r_hat);
  const double kappa = (1.0 - chi) / chi;
  const double eta_p = costs.eta_prime(kappa * t.r_hat);
  t.i_hat = chi / (1.0 - chi) * (t.gamma_prime_r_hat - i_r) + eta_p;
  t.i_bar = (1.0 + i_r - t.gamma_prime_r_hat) * (1.0 + eta_p) - 1.0;
  t.i_lower = i_r - costs.gamma_prime(t.r_lower);
  return t;
}

// One DM meeting type's allocation.
struct MeetingOutcome {
  int j = 0;                // meeting type, 1..3
  double q = 0.0;           // DM quantity
  double z = 0.0;           // total liquidity
  double m = 0.0;           // cash
  double d = 0.0;           // deposits (face value)
  double l = 0.0;           // banknotes borrowed
  double credit_used = 0.0; // unsecured credit drawn
};

struct Equilibrium {
  Regime regime = Regime::NoBanking;
  PolicyPoint policy;
  BankAllocation bank;
  std::array<MeetingOutcome, 3> meetings;
  double m = 0.0;          // aggregate cash
  double r = 0.0;          // aggregate reserves
  double l = 0.0;          // aggregate loans (banknotes)
  double delta_hat = 0.0;  // liquidity need L^{-1}(i_l)

  explicit Equilibrium(const PolicyPoint& p) : policy(p) {}
};

// Everything in the equilibrium that is independent of the credit limit:
// the regime, per-bank quantities, rates, and the two liquidity targets.
// Splitting here lets the credit-limit back-out re-solve cheaply.
struct RegimeCore {
  Regime regime = Regime::NoBanking;
  double r_tilde = 0.0;
  double l_tilde = 0.0;
  double i_d = 0.0;
  double i_l = 0.0;
  double lambda_L = 0.0;
  double z1 = 0.0;         // cash-meeting liquidity target L^{-1}(i)
  double delta_hat = 0.0;  // bank-meeting liquidity target L^{-1}(i_l)
};

namespace detail {

// Deposit rate under a binding lending constraint: positive root of
//   i_d^2 + (1 - c1) i_d - (c1 + (1+i) kappa) = 0,
// c1 = i_r - gamma'(r_hat) - kappa (1 + eta'(kappa r_hat)),
// obtained by clearing (1 + i_d) in the bank's combined FOC. The form
// 2q / (b + sqrt(b^2 + 4q)) avoids cancellation for large kappa.
inline double scarce_deposit_rate(const BankCostParams& costs, double i,
                                  double i_r, double chi, double rh) {
  const double kappa = (1.0 - chi) / chi;
  const double c1 = i_r - costs.gamma_prime(rh) -
                    kappa * (1.0 + costs.eta_prime(kappa * rh));
  const double bq = 1.0 - c1;
  const double qq = c1 + (1.0 + i) * kappa;
  const double disc = bq * bq + 4.0 * qq;
  if (disc < 0.0)
    throw SolverError("scarce_deposit_rate: negative discriminant");
  return 2.0 * qq / (bq + std::sqrt(disc));
}

// Interest rate below which no banking equilibrium survives when
// gamma'(r_hat) < i_r: the lending rate at the point where the deposit rate
// hits zero along the unconstrained entry locus.
inline double no_banking_ceiling(const BankCostParams& costs, double i_r,
                                 const Thresholds& th) {
  double r0 = costs.gamma_prime_inverse(i_r);
  r0 = std::clamp(r0, th.r_hat, th.r_lower);
  return std::max(th.i_lower, costs.eta_prime(costs.entry_lending(r0)));
}

inline void verify_or_throw(bool ok, const char* what) {
  if (!ok) throw SolverError(std::string("equilibrium check failed: ") + what);
}

// Liquidity identities, quantity consistency, and market clearing; holds in
// every regime.
inline void verify_common(const Preferences& prefs, const Equilibrium& eq) {
  constexpr double tol = 1e-10;
  const PolicyPoint& p = eq.policy;
  for (const auto& mt : eq.meetings) {
    const double z_sum = mt.m + (1.0 + eq.bank.i_d) * mt.d + mt.l + mt.credit_used;
    verify_or_throw(std::abs(mt.z - z_sum) <= tol, "liquidity identity");
    verify_or_throw(mt.credit_used <= p.delta_bar + 1e-12, "credit limit");
    verify_or_throw(mt.m >= 0.0 && mt.d >= 0.0 && mt.l >= 0.0 &&
                        mt.credit_used >= 0.0, "nonnegative positions");
    // q = min(q*, v^{-1}(z)) checked through the cheap forward map.
    verify_or_throw(mt.q <= prefs.q_star() * (1.0 + 1e-12) &&
                        std::abs(prefs.payment(mt.q) -
                                 std::min(mt.z, prefs.p_star())) <= 1e-8,
                    "q = min(q*, v^-1(z))");
  }
  const double d_agg = p.sigma2 * eq.meetings[1].d + p.sigma3 * eq.meetings[2].d;
  const double l_agg = p.sigma2 * eq.meetings[1].l + p.sigma3 * eq.meetings[2].l;
  const double m_agg = p.sigma1 * eq.meetings[0].m + p.sigma2 * eq.meetings[1].m +
                       p.sigma3 * eq.meetings[2].m;
  verify_or_throw(std::abs(d_agg - eq.r) <= tol, "deposit clearing");
  verify_or_throw(std::abs(l_agg - eq.l) <= tol, "loan clearing");
  verify_or_throw(std::abs(m_agg - eq.m) <= tol, "cash clearing");
  if (eq.regime == Regime::NoBanking) {
    verify_or_throw(eq.r == 0.0 && eq.l == 0.0 && eq.bank.n == 0.0,
                    "no-banking zeros");
    verify_or_throw(eq.bank.i_d == 0.0, "no-banking deposit rate");
  }
}

// Bank optimality, free entry, and slackness; banking regimes only.
inline void verify_banking(const Preferences& prefs, const BankCostParams& costs,
                           const Equilibrium& eq) {
  constexpr double tol = 1e-10;
  const PolicyPoint& p = eq.policy;
  verify_common(prefs, eq);
  const auto [f1, f2] = bank_foc_residuals(costs, eq.bank, p);
  verify_or_throw(std::abs(f1) <= tol && std::abs(f2) <= tol, "bank FOCs");
  if (eq.bank.n > 0.0)
    verify_or_throw(std::abs(entry_profit(costs, eq.bank, p)) <= tol,
                    "free entry");
  verify_or_throw(eq.bank.lambda_L >= -tol, "multiplier sign");
  const double slack = p.kappa() * eq.bank.r_tilde - eq.bank.l_tilde;
  verify_or_throw(slack >= -1e-12, "lending constraint");
  verify_or_throw(std::abs(eq.bank.lambda_L * slack) <= tol,
                  "complementary slackness");
  const double gross = (1.0 + eq.bank.i_d) * (1.0 + eq.bank.i_l);
  verify_or_throw(std::abs(gross - (1.0 + p.i)) <= 1e-9, "rate identity");
}

inline RegimeCore core_no_banking(const Preferences& prefs,
                                  const PolicyPoint& policy) {
  RegimeCore core;
  core.regime = Regime::NoBanking;
  core.z1 = prefs.L_inverse(policy.i);
  core.delta_hat = prefs.p_star();  // L^{-1}(i_l) with i_l = 0
  return core;
}

inline RegimeCore core_scarce(const Preferences& prefs,
                              const BankCostParams& costs,
                              const PolicyPoint& policy) {
  if (!(policy.chi < 1.0))
    throw DomainError("solve_scarce: chi = 1 admits no bank lending");
  RegimeCore core;
  core.regime = Regime::ScarceReserves;
  core.r_tilde = costs.r_hat(policy.chi);
  core.l_tilde = policy.kappa() * core.r_tilde;
  core.i_d = scarce_deposit_rate(costs, policy.i, policy.i_r, policy.chi,
                                 core.r_tilde);
  if (!(core.i_d > 0.0))
    throw SolverError("solve_scarce: nonpositive deposit rate; point is not "
                      "in the scarce-reserves region");
  core.i_l = (1.0 + policy.i) / (1.0 + core.i_d) - 1.0;
  core.lambda_L = core.i_l - costs.eta_prime(core.l_tilde);
  if (!(core.lambda_L > -1e-12))
    throw SolverError("solve_scarce: lending constraint does not bind; point "
                      "is not in the scarce-reserves region");
  core.lambda_L = std::max(core.lambda_L, 0.0);
  core.z1 = prefs.L_inverse(policy.i);
  core.delta_hat = prefs.L_inverse(core.i_l);
  return core;
}

inline RegimeCore core_ample(const Preferences& prefs,
                             const BankCostParams& costs,
                             const PolicyPoint& policy) {
  if (!(policy.chi < 1.0))
    throw DomainError("solve_ample: chi = 1 admits no bank lending");
  const double rh = costs.r_hat(policy.chi);
  const double rl = costs.r_lower();
  // Pricing residual along the free-entry locus; strictly decreasing in r.
  auto pricing = [&](double r) {
    const double l = costs.entry_lending(r);
    return (1.0 + costs.eta_prime(l)) * (1.0 + policy.i_r - costs.gamma_prime(r)) -
           (1.0 + policy.i);
  };
  const double f_lo = pricing(rh);
  const double f_hi = pricing(rl);
  double r_tilde;
  if (f_lo == 0.0) {
    r_tilde = rh;
  } else if (f_hi == 0.0) {
    r_tilde = rl;
  } else if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw SolverError("solve_ample: pricing equation has no root in "
                      "[r_hat, r_lower]; point is not in the ample region");
  } else {
    auto dpricing = [&](double r) {
      const double l = costs.entry_lending(r);
      const double dl =
          l > 0.0 ? -costs.gamma_second(r) * r / (costs.eta_second(l) * l) : 0.0;
      return costs.eta_second(l) * dl * (1.0 + policy.i_r - costs.gamma_prime(r)) -
             (1.0 + costs.eta_prime(l)) * costs.gamma_second(r);
    };
    r_tilde = bisect_newton(pricing, dpricing, rh, rl);
  }
  RegimeCore core;
  core.regime = Regime::AmpleReserves;
  core.r_tilde = r_tilde;
  core.l_tilde = costs.entry_lending(r_tilde);
  core.i_d = policy.i_r - costs.gamma_prime(r_tilde);
  if (!(core.i_d > 0.0))
    throw SolverError("solve_ample: nonpositive deposit rate; point is not "
                      "in the ample-reserves region");
  core.i_l = costs.eta_prime(core.l_tilde);
  if (!(core.l_tilde < policy.kappa() * core.r_tilde + 1e-12))
    throw SolverError("solve_ample: lending limit binds; point is not in the "
                      "ample-reserves region");
  core.z1 = prefs.L_inverse(policy.i);
  core.delta_hat = prefs.L_inverse(core.i_l);
  return core;
}

}  // namespace detail

// Regime classification. Follows the threshold characterization, resolving
// the boundary ambiguity in its no-banking case by feasibility: whenever the
// candidate banking equilibrium would carry a nonpositive deposit rate,
// agents hold no deposits and the no-banking equilibrium obtains. Ties at a
// threshold break toward the regime with weakly fewer banks.
inline Regime classify(const BankCostParams& costs, const PolicyPoint& policy) {
  const Thresholds th = thresholds(costs, policy.i_r, policy.chi);
  if (policy.i_r > th.gamma_prime_r_hat) {
    if (policy.i >= th.i_bar) return Regime::ScarceReserves;
    if (policy.i > detail::no_banking_ceiling(costs, policy.i_r, th))
      return Regime::AmpleReserves;
    return Regime::NoBanking;
  }
  if (policy.i > th.i_hat) return Regime::ScarceReserves;
  return Regime::NoBanking;
}

// Applies the credit limit to a solved core: the credit branch, the bank
// measure, market-clearing positions, and aggregates. Runs the invariant
// battery before returning.
inline Equilibrium apply_credit(const Preferences& prefs,
                                const BankCostParams& costs,
                                const RegimeCore& core,
                                const PolicyPoint& policy) {
  Equilibrium eq(policy);
  eq.regime = core.regime;
  eq.delta_hat = core.delta_hat;

  if (core.regime == Regime::NoBanking) {
    const double target = core.z1;
    auto& m1 = eq.meetings[0];
    m1.j = 1;
    m1.m = target;
    m1.z = target;
    auto& m2 = eq.meetings[1];
    m2.j = 2;
    m2.m = target;
    m2.z = target;
    auto& m3 = eq.meetings[2];
    m3.j = 3;
    m3.credit_used = std::min(policy.delta_bar, target);
    m3.m = std::max(0.0, target - policy.delta_bar);
    m3.z = m3.m + m3.credit_used;
    for (auto& mt : eq.meetings)
      mt.q = prefs.payment_inverse(std::min(mt.z, prefs.p_star()));
    eq.m = policy.sigma1 * m1.m + policy.sigma2 * m2.m + policy.sigma3 * m3.m;
    detail::verify_common(prefs, eq);
    return eq;
  }

  eq.bank.r_tilde = core.r_tilde;
  eq.bank.l_tilde = core.l_tilde;
  eq.bank.i_d = core.i_d;
  eq.bank.i_l = core.i_l;
  eq.bank.lambda_L = core.lambda_L;

  // DM2/DM3 buyers hold no cash: with i_d > 0 deposits strictly dominate
  // cash, and at i_d = 0 the split is indeterminate so all balances are
  // assigned to bank money (documented tie-break).
  eq.m = policy.sigma1 * core.z1;

  // Credit branch: below delta_hat the DM3 buyer draws the full limit and
  // tops up with bank money; at or above it credit alone covers the target.
  const bool constrained = core.delta_hat > policy.delta_bar;
  const double credit3 = constrained ? policy.delta_bar
                                     : std::min(policy.delta_bar, core.delta_hat);
  const double need2 = core.delta_hat;
  const double need3 = constrained ? core.delta_hat - policy.delta_bar : 0.0;
  const double need_agg = policy.sigma2 * need2 + policy.sigma3 * need3;

  // Bank measure from the aggregate bank-money requirement; each unit of
  // deposits contributes (1 + i_d) of DM liquidity.
  const double funding = (1.0 + core.i_d) * core.r_tilde + core.l_tilde;
  eq.bank.n = need_agg > 0.0 && funding > 0.0 ? need_agg / funding : 0.0;
  eq.r = eq.bank.n * core.r_tilde;
  eq.l = eq.bank.n * core.l_tilde;

  // Per-buyer deposits and banknotes in fixed aggregate proportions.
  const double d_share = need_agg > 0.0 ? eq.r / need_agg : 0.0;
  const double l_share = need_agg > 0.0 ? eq.l / need_agg : 0.0;

  auto& m1 = eq.meetings[0];
  m1.j = 1;
  m1.m = core.z1;
  m1.z = core.z1;
  m1.q = prefs.payment_inverse(std::min(m1.z, prefs.p_star()));

  auto& m2 = eq.meetings[1];
  m2.j = 2;
  m2.d = d_share * need2;
  m2.l = l_share * need2;
  m2.z = (1.0 + core.i_d) * m2.d + m2.l;
  m2.q = prefs.payment_inverse(std::min(m2.z, prefs.p_star()));

  auto& m3 = eq.meetings[2];
  m3.j = 3;
  m3.d = d_share * need3;
  m3.l = l_share * need3;
  m3.credit_used = credit3;
  m3.z = (1.0 + core.i_d) * m3.d + m3.l + m3.credit_used;
  m3.q = prefs.payment_inverse(std::min(m3.z, prefs.p_star()));

  detail::verify_banking(prefs, costs, eq);
  return eq;
}

// Credit-limit-independent part of the equilibrium at a policy point.
inline RegimeCore solve_core(const Preferences& prefs,
                             const BankCostParams& costs,
                             const PolicyPoint& policy) {
  switch (classify(costs, policy)) {
    case Regime::NoBanking: return detail::core_no_banking(prefs, policy);
    case Regime::ScarceReserves: return detail::core_scarce(prefs, costs, policy);
    case Regime::AmpleReserves: return detail::core_ample(prefs, costs, policy);
  }
  throw SolverError("solve_core: unreachable");
}

// Cash-only equilibrium: zero deposit rate, no active banks. DM3 buyers use
// free credit first and top up with cash toward the same liquidity target.
inline Equilibrium solve_no_banking(const Preferences& prefs,
                                    const PolicyPoint& policy) {
  // Costs are unused on the no-banking path; pass inert placeholders.
  const BankCostParams unused(1.0, 2.0, 1.0, 1.0);
  return apply_credit(prefs, unused, detail::core_no_banking(prefs, policy),
                      policy);
}

// Binding lending constraint: per-bank reserves are pinned by the entry
// locus independent of rates; the deposit rate solves the combined FOC.
inline Equilibrium solve_scarce(const Preferences& prefs,
                                const BankCostParams& costs,
                                const PolicyPoint& policy) {
  return apply_credit(prefs, costs, detail::core_scarce(prefs, costs, policy),
                      policy);
}

// Slack lending constraint: (r_tilde, l_tilde) solve the pricing equation
// and the free-entry locus. Both maps are monotone, so an outer bisection on
// r_tilde over [r_hat, r_lower] with the lending level closed out by the
// entry locus is globally convergent.
inline Equilibrium solve_ample(const Preferences& prefs,
                               const BankCostParams& costs,
                               const PolicyPoint& policy) {
  return apply_credit(prefs, costs, detail::core_ample(prefs, costs, policy),
                      policy);
}

// Classify, dispatch, and return a fully verified equilibrium.
inline Equilibrium solve(const Preferences& prefs, const BankCostParams& costs,
                         const PolicyPoint& policy) {
  return apply_credit(prefs, costs, solve_core(prefs, costs, policy), policy);
}

}  // namespace frbank
