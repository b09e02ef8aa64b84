#include "gdlab/phi.hpp"

#include <cmath>
#include <limits>

namespace gdlab {

UnivariatePhi make_phi_quadratic_tail(const TailFunction& tail) {
  UnivariatePhi p;
  p.name = "quad_tail[" + tail.name + "]";
  p.variant = PhiVariant::quadratic_tail;
  p.tail = tail;
  p.beta = tail.beta;
  p.smooth_from = -std::numeric_limits<double>::infinity();
  const double r0 = tail.rho(0.0);
  const double r0p = tail.rho_prime(0.0);
  const double beta = tail.beta;
  const auto rho = tail.rho;
  const auto rho_prime = tail.rho_prime;
  p.phi = [=](double x) {
    return x >= 0.0 ? rho(x) : r0 + r0p * x + 0.5 * beta * x * x;
  };
  p.phi_prime = [=](double x) {
    return x >= 0.0 ? rho_prime(x) : r0p + beta * x;
  };
  return p;
}

UnivariatePhi make_phi_linear_tail(const TailFunction& tail) {
  UnivariatePhi p;
  p.name = "lin_tail[" + tail.name + "]";
  p.variant = PhiVariant::linear_tail;
  p.tail = tail;
  p.beta = tail.beta;
  p.smooth_from = -std::numeric_limits<double>::infinity();
  const double r0 = tail.rho(0.0);
  const double r0p = tail.rho_prime(0.0);
  const auto rho = tail.rho;
  const auto rho_prime = tail.rho_prime;
  p.phi = [=](double x) { return x >= 0.0 ? rho(x) : r0 + r0p * x; };
  p.phi_prime = [=](double x) { return x >= 0.0 ? rho_prime(x) : r0p; };
  return p;
}

UnivariatePhi make_phi_raw_exponential() {
  UnivariatePhi p;
  p.name = "raw_exp";
  p.variant = PhiVariant::raw;
  p.tail = make_exponential_tail(1.0);
  p.beta = 1.0;
  p.smooth_from = 0.0;
  p.phi = [](double x) { return std::exp(-x); };
  p.phi_prime = [](double x) { return -std::exp(-x); };
  return p;
}

}  // namespace gdlab
