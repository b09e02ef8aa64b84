#pragma once

#include <functional>
#include <string>

#include "gdlab/tail.hpp"

namespace gdlab {

enum class PhiVariant { quadratic_tail, linear_tail, raw };

// Univariate margin loss: convex, nonincreasing, dominated by its tail on
// x >= 0. The two *_tail variants extend a tail function to the negatives.
struct UnivariatePhi {
  std::string name;
  PhiVariant variant = PhiVariant::raw;
  TailFunction tail;
  double beta = 1.0;
  // Lower edge of the box on which phi is beta-smooth; -inf for the
  // extended variants, 0 for raw tails that blow up on the negatives.
  double smooth_from = 0.0;
  std::function<double(double)> phi;
  std::function<double(double)> phi_prime;
};

// phi(x) = rho(x) for x >= 0, rho(0) + rho'(0) x + (beta/2) x^2 for x < 0.
UnivariatePhi make_phi_quadratic_tail(const TailFunction& tail);

// phi(x) = rho(x) for x >= 0, rho'(0) x + rho(0) for x < 0.
UnivariatePhi make_phi_linear_tail(const TailFunction& tail);

// phi(x) = e^{-x} on all of R. Smooth with beta = e^{-a} only on boxes
// bounded below by a, hence smooth_from = 0 with beta = 1.
UnivariatePhi make_phi_raw_exponential();

}  // namespace gdlab
