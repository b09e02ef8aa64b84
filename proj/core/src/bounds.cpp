#include "gdlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"

namespace gdlab {

double BoundInputs::eta_or_default() const {
  return eta > 0.0 ? eta : default_step_size(beta, k, p);
}

void BoundInputs::validate() const {
  if (!(epsilon > 0.0) || epsilon > 0.5) {
    throw std::invalid_argument("BoundInputs: epsilon must lie in (0, 1/2]");
  }
  if (!(beta > 0.0) || k < 2 || !(p >= 2.0) || !(gamma > 0.0) || !(T >= 1.0) ||
      !(n >= 1.0)) {
    throw std::invalid_argument("BoundInputs: nonpositive or missing field");
  }
}

bool epsilon_feasible(const BoundInputs& in, FeasibilitySide side) {
  in.validate();
  const double inv = in.rho.inverse(in.epsilon / in.k);
  const double lhs = in.eta_or_default() * in.gamma * in.gamma * in.T;
  const double rhs = inv * inv / in.epsilon;
  return side == FeasibilitySide::upper ? lhs <= rhs : lhs >= rhs;
}

BoundTerms bound_values(const BoundInputs& in) {
  in.validate();
  const double eta = in.eta_or_default();
  const double kf = k_smoothness_factor(in.k, in.p);
  const double g2 = in.gamma * in.gamma;
  const double inv = in.rho.inverse(in.epsilon / in.k);

  // arguments above rho(0) mean the corresponding scaled epsilon is already
  // trivial; the inverse is clamped to 0 there
  auto inv_or_zero = [&](double eps_scaled) {
    return eps_scaled >= in.rho.rho0() ? 0.0 : in.rho.inverse(eps_scaled);
  };
  const double inv256 = inv_or_zero(256.0 * in.epsilon / in.k);
  const double inv16 = inv_or_zero(16.0 * in.epsilon / in.k);

  BoundTerms t;
  t.opt_term = 24.0 * in.beta * kf * inv * inv / (g2 * in.T);
  t.gen_term = in.beta * kf * inv * inv / (g2 * in.n);
  t.B_eps = 4.0 * inv / in.gamma;
  t.M_eps = 5.0 * inv * inv / (eta * g2);
  t.r_eps = 3.0 * inv * inv / (g2 * eta * in.T);
  t.lower_n_term = in.beta * in.k * inv256 * inv256 / (g2 * in.n);
  t.lower_t_term = inv16 * inv16 / (eta * g2 * in.T);
  return t;
}

}  // namespace gdlab
