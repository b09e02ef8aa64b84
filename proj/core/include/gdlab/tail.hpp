#pragma once

#include <functional>
#include <string>

namespace gdlab {

// Decay-rate object: a nonnegative, 1-Lipschitz, beta-smooth, strictly
// decreasing convex function rho with rho(0) >= 1 and |rho'(0)| >= 1/2.
// Instances are immutable values; all members are pure.
struct TailFunction {
  std::string name;
  double beta = 1.0;       // smoothness constant of rho
  double lipschitz = 1.0;  // always <= 1 for a valid tail
  std::function<double(double)> rho;
  std::function<double(double)> rho_prime;
  // Closed-form inverse when available; empty means bisection fallback.
  std::function<double(double)> rho_inverse_closed;

  double rho0() const { return rho(0.0); }

  // rho^{-1}(eps) for eps in (0, rho(0)]; throws std::domain_error outside.
  // Falls back to bisection on [0, X] with X doubled until rho(X) < eps,
  // absolute tolerance 1e-12.
  double inverse(double eps) const;
};

enum class TailKind { exponential, polynomial };

// rho(x) = (1/alpha) e^{-alpha x}; a strict tail function for alpha <= 1
// (alpha > 1 breaks rho(0) >= 1 together with 1-Lipschitzness).
TailFunction make_exponential_tail(double alpha);

// rho(x) = (1+x)^{-alpha} for alpha in [1/2, 1]; beta = alpha(alpha+1).
TailFunction make_polynomial_tail(double alpha);

TailFunction make_tail(TailKind kind, double alpha);

}  // namespace gdlab
