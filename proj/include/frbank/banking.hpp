#pragma once

#include <cmath>
#include <utility>

#include "frbank/common.hpp"
#include "frbank/policy.hpp"
#include "frbank/rootfind.hpp"

namespace frbank {

// Bank cost technology and the closed-form objects shared by every regime
// solver: deposit-management cost gamma(d) = A d^a, loan-enforcement cost
// eta(l) = E l^2, the entry-locus roots r_hat and r_lower.
struct BankCostParams {
  double A;  // deposit-cost scale, > 0
  double a;  // deposit-cost curvature, > 1
  double E;  // enforcement-cost scale, > 0
  double k;  // bank entry cost in CM-good units, > 0

  BankCostParams(double A_, double a_, double E_, double k_)
      : A(A_), a(a_), E(E_), k(k_) {
    if (!(A > 0.0)) throw DomainError("BankCostParams: A must be positive");
    if (!(a > 1.0)) throw DomainError("BankCostParams: a must exceed 1");
    if (!(E > 0.0)) throw DomainError("BankCostParams: E must be positive");
    if (!(k > 0.0)) throw DomainError("BankCostParams: k must be positive");
  }

  double gamma(double d) const {
    check_nonneg(d, "gamma");
    return A * std::pow(d, a);
  }
  double gamma_prime(double d) const {
    check_nonneg(d, "gamma_prime");
    return A * a * std::pow(d, a - 1.0);
  }
  double gamma_second(double d) const {
    return A * a * (a - 1.0) * std::pow(d, a - 2.0);
  }
  double gamma_prime_inverse(double y) const {
    check_nonneg(y, "gamma_prime_inverse");
    return std::pow(y / (A * a), 1.0 / (a - 1.0));
  }

  double eta(double l) const {
    check_nonneg(l, "eta");
    return E * l * l;
  }
  double eta_prime(double l) const {
    check_nonneg(l, "eta_prime");
    return 2.0 * E * l;
  }
  double eta_second(double) const { return 2.0 * E; }
  double eta_prime_inverse(double y) const {
    check_nonneg(y, "eta_prime_inverse");
    return y / (2.0 * E);
  }

  // gamma'(r) r - gamma(r) + eta'(kr) kr - eta(kr) - k, with kr = kappa * r.
  // Zero at r = 0 and strictly increasing, so it pins a unique root.
  double entry_locus(double r, double kappa) const {
    const double kr = kappa * r;
    return gamma_prime(r) * r - gamma(r) + eta_prime(kr) * kr - eta(kr) - k;
  }

  double entry_locus_prime(double r, double kappa) const {
    return gamma_second(r) * r + eta_second(kappa * r) * kappa * kappa * r;
  }

  // Lending level closing the free-entry condition at per-bank reserves r:
  // eta'(l) l - eta(l) = k - [gamma'(r) r - gamma(r)], i.e. E l^2 = residual.
  double entry_lending(double r) const {
    const double residual = k - (gamma_prime(r) * r - gamma(r));
    if (residual <= 0.0) return 0.0;
    return std::sqrt(residual / E);
  }

  // Root of gamma'(r) r - gamma(r) = k; closed form (k / (A (a-1)))^{1/a}.
  double r_lower() const { return std::pow(k / (A * (a - 1.0)), 1.0 / a); }

  // Per-bank reserves under a binding lending constraint: unique positive
  // root of the entry locus given the reserve requirement chi.
  double r_hat(double chi) const {
    if (!(chi > 0.0) || !(chi <= 1.0))
      throw DomainError("r_hat: chi must lie in (0,1]");
    const double kappa = (1.0 - chi) / chi;
    auto f = [&](double r) { return entry_locus(r, kappa); };
    auto df = [&](double r) { return entry_locus_prime(r, kappa); };
    auto [lo, hi] = grow_upper_bracket(f, 1e-10, 1.0);
    return bisect_newton(f, df, lo, hi);
  }

 private:
  static void check_nonneg(double x, const char* op) {
    if (!(x >= 0.0))
      throw DomainError(std::string(op) + ": argument must be nonnegative");
  }
};

// Per-bank balance sheet and prices at a candidate equilibrium.
struct BankAllocation {
  double r_tilde = 0.0;   // per-bank real reserves (= per-bank deposits)
  double l_tilde = 0.0;   // per-bank real lending
  double i_d = 0.0;       // deposit rate
  double i_l = 0.0;       // lending rate
  double lambda_L = 0.0;  // lending-constraint multiplier
  double n = 0.0;         // measure of active banks
};

// Residuals of the two bank first-order conditions. Diagnostic: a solved
// banking equilibrium must drive both below 1e-10 in absolute value.
inline std::pair<double, double> bank_foc_residuals(const BankCostParams& costs,
                                                    const BankAllocation& alloc,
                                                    const PolicyPoint& policy) {
  const double foc_r = policy.i_r - alloc.i_d - costs.gamma_prime(alloc.r_tilde) +
                       alloc.lambda_L * policy.kappa();
  const double foc_l = alloc.i_l - costs.eta_prime(alloc.l_tilde) - alloc.lambda_L;
  return {foc_r, foc_l};
}

// Ex-post bank profit net of the entry cost; zero under free entry with
// active banks.
inline double entry_profit(const BankCostParams& costs,
                           const BankAllocation& alloc,
                           const PolicyPoint& policy) {
  return (policy.i_r - alloc.i_d) * alloc.r_tilde + alloc.i_l * alloc.l_tilde -
         costs.gamma(alloc.r_tilde) - costs.eta(alloc.l_tilde) - costs.k;
}

}  // namespace frbank
