#pragma once

#include "gdlab/tail.hpp"

namespace gdlab {

// Named quantities entering the risk bounds. eta == 0 means "use the default
// step size 1/(6 beta k^{2/p})".
struct BoundInputs {
  TailFunction rho;
  double beta = 1.0;
  double p = 2.0;
  int k = 2;
  double gamma = 0.1;
  double T = 1.0;
  double n = 1.0;
  double eta = 0.0;
  double epsilon = 0.25;  // in (0, 1/2]
  double B = 0.0, r = 0.0, M = 0.0;

  double eta_or_default() const;
  void validate() const;
};

enum class FeasibilitySide { upper, lower };

// Step-size/horizon condition of the relevant theorem, boundary feasible:
//   upper: eta gamma^2 T <= rho^{-1}(eps/k)^2 / eps
//   lower: eta gamma^2 T >= rho^{-1}(eps/k)^2 / eps
bool epsilon_feasible(const BoundInputs& in, FeasibilitySide side);

// Explicit-constant bound terms. gen/lower terms carry constants that the
// analysis leaves polylogarithmic ("order level"); they are reported with
// unit constant and must only be used for order/slope checks.
struct BoundTerms {
  double opt_term = 0.0;      // 24 beta k^{2/p} rho^{-1}(eps/k)^2 / (gamma^2 T)
  double gen_term = 0.0;      // beta k^{2/p} rho^{-1}(eps/k)^2 / (gamma^2 n)
  double B_eps = 0.0;         // 4 rho^{-1}(eps/k) / gamma
  double M_eps = 0.0;         // 5 rho^{-1}(eps/k)^2 / (eta gamma^2)
  double r_eps = 0.0;         // 3 rho^{-1}(eps/k)^2 / (gamma^2 eta T)
  double lower_n_term = 0.0;  // beta k rho^{-1}(256 eps/k)^2 / (gamma^2 n)
  double lower_t_term = 0.0;  // rho^{-1}(16 eps/k)^2 / (eta gamma^2 T)
  bool gen_order_level = true;
  bool lower_order_level = true;
};

BoundTerms bound_values(const BoundInputs& in);

}  // namespace gdlab
