#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>

#include "frbank/banking.hpp"
#include "frbank/equilibrium.hpp"
#include "frbank/policy.hpp"
#include "frbank/preferences.hpp"

namespace testutil {

inline frbank::Preferences benchmark_prefs() {
  return frbank::Preferences(0.825, 0.398, 0.454);
}

inline frbank::BankCostParams benchmark_costs() {
  return frbank::BankCostParams(0.0017, 1.2, 0.001, 0.0011);
}

inline frbank::PolicyPoint make_policy(double i, double i_r, double chi,
                                       double delta_bar, double sigma1 = 0.187,
                                       double sigma3 = 0.69) {
  return frbank::PolicyPoint(i, i_r, chi, delta_bar, sigma1,
                             1.0 - sigma1 - sigma3, sigma3);
}

// Brute-force regime determination: solve both banking systems from scratch
// and apply the unconstrained-versus-limit lending test, requiring a positive
// deposit rate for banks to attract deposits at all. Independent of the
// threshold formulas used by classify().
inline frbank::Regime classify_oracle(const frbank::BankCostParams& costs,
                                      const frbank::PolicyPoint& policy) {
  using frbank::Regime;
  const double chi = policy.chi;
  const double kappa = (1.0 - chi) / chi;
  const double rh = costs.r_hat(chi);

  // Candidate with a binding lending limit: l* >= l_bar > 0.
  {
    const double lh = kappa * rh;
    // Deposit rate from the combined FOC, found by bisection on
    // f(i_d) = i_r - i_d - gamma'(rh) + [ (1+i)/(1+i_d) - 1 - eta'(lh) ] kappa.
    auto f = [&](double i_d) {
      return policy.i_r - i_d - costs.gamma_prime(rh) +
             ((1.0 + policy.i) / (1.0 + i_d) - 1.0 - costs.eta_prime(lh)) * kappa;
    };
    double lo = -0.999, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    const double i_d = 0.5 * (lo + hi);
    const double i_l = (1.0 + policy.i) / (1.0 + i_d) - 1.0;
    const double l_star = costs.eta_prime_inverse(std::max(i_l, 0.0));
    if (i_d > 0.0 && l_star >= lh) return Regime::ScarceReserves;
  }

  // Candidate with a slack limit: l_bar > l* >= 0.
  {
    const double rl = costs.r_lower();
    auto pricing = [&](double r) {
      const double l = costs.entry_lending(r);
      return (1.0 + costs.eta_prime(l)) *
                 (1.0 + policy.i_r - costs.gamma_prime(r)) -
             (1.0 + policy.i);
    };
    double lo = rh, hi = rl;
    const double f_lo = pricing(lo), f_hi = pricing(hi);
    if (f_lo == 0.0 || f_hi == 0.0 || (f_lo > 0.0) != (f_hi > 0.0)) {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((pricing(mid) > 0.0) == (f_lo > 0.0)) lo = mid; else hi = mid;
      }
      const double r_tilde = 0.5 * (lo + hi);
      const double l_star = costs.entry_lending(r_tilde);
      const double i_d = policy.i_r - costs.gamma_prime(r_tilde);
      if (i_d > 0.0 && kappa * r_tilde > l_star) return Regime::AmpleReserves;
    }
  }

  return Regime::NoBanking;
}

}  // namespace testutil
