#pragma once

#include <cmath>

#include "frbank/common.hpp"

namespace frbank {

// One policy configuration: the monetary triple (i, i_r, chi), the unsecured
// credit limit, and the meeting-type probabilities.
struct PolicyPoint {
  double i;          // net nominal interest rate, >= 0
  double i_r;        // net interest on reserves, >= 0
  double chi;        // reserve requirement, in (0,1]
  double delta_bar;  // unsecured credit limit in CM-good units, >= 0
  double sigma1;     // cash-only meeting probability
  double sigma2;     // bank-money meeting probability
  double sigma3;     // credit-access meeting probability

  PolicyPoint(double i_, double i_r_, double chi_, double delta_bar_,
              double sigma1_, double sigma2_, double sigma3_)
      : i(i_), i_r(i_r_), chi(chi_), delta_bar(delta_bar_),
        sigma1(sigma1_), sigma2(sigma2_), sigma3(sigma3_) {
    if (!(i >= 0.0))
      throw DomainError(
          "PolicyPoint: i must be nonnegative; no stationary monetary "
          "equilibrium exists for a negative nominal rate");
    if (!(i_r >= 0.0)) throw DomainError("PolicyPoint: i_r must be nonnegative");
    if (!(chi > 0.0) || !(chi <= 1.0))
      throw DomainError("PolicyPoint: chi must lie in (0,1]");
    if (!(delta_bar >= 0.0))
      throw DomainError("PolicyPoint: delta_bar must be nonnegative");
    if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0) || !(sigma3 >= 0.0))
      throw DomainError("PolicyPoint: meeting probabilities must be nonnegative");
    if (std::abs(sigma1 + sigma2 + sigma3 - 1.0) > 1e-12)
      throw DomainError("PolicyPoint: meeting probabilities must sum to 1");
  }

  // Lending-limit slope: loans may not exceed kappa * reserves.
  double kappa() const { return (1.0 - chi) / chi; }
};

}  // namespace frbank
