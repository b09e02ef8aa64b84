#include "gdlab/tail.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gdlab {

double TailFunction::inverse(double eps) const {
  const double r0 = rho0();
  if (!(eps > 0.0) || eps > r0 * (1.0 + 1e-12)) {
    throw std::domain_error("rho_inverse: eps=" + std::to_string(eps) +
                            " outside (0, rho(0)=" + std::to_string(r0) + "]");
  }
  if (rho_inverse_closed) return rho_inverse_closed(eps);

  double hi = 1.0;
  while (rho(hi) >= eps) {
    hi *= 2.0;
    if (hi > 1e18) throw std::runtime_error("rho_inverse: bisection bracket blew up");
  }
  double lo = 0.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) >= eps) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TailFunction make_exponential_tail(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("exponential tail needs alpha > 0");
  }
  TailFunction t;
  t.name = "exp(alpha=" + std::to_string(alpha) + ")";
  t.beta = alpha;
  t.lipschitz = 1.0;
  t.rho = [alpha](double x) { return std::exp(-alpha * x) / alpha; };
  t.rho_prime = [alpha](double x) { return -std::exp(-alpha * x); };
  t.rho_inverse_closed = [alpha](double eps) {
    return std::log(1.0 / (alpha * eps)) / alpha;
  };
  return t;
}

TailFunction make_polynomial_tail(double alpha) {
  if (alpha < 0.5 || alpha > 1.0) {
    throw std::invalid_argument(
        "polynomial tail constraint violated: alpha must lie in [1/2, 1], got " +
        std::to_string(alpha));
  }
  TailFunction t;
  t.name = "poly(alpha=" + std::to_string(alpha) + ")";
  t.beta = alpha * (alpha + 1.0);
  t.lipschitz = alpha;
  t.rho = [alpha](double x) { return std::pow(1.0 + x, -alpha); };
  t.rho_prime = [alpha](double x) {
    return -alpha * std::pow(1.0 + x, -alpha - 1.0);
  };
  t.rho_inverse_closed = [alpha](double eps) {
    return std::pow(eps, -1.0 / alpha) - 1.0;
  };
  return t;
}

TailFunction make_tail(TailKind kind, double alpha) {
  switch (kind) {
    case TailKind::exponential:
      return make_exponential_tail(alpha);
    case TailKind::polynomial:
      return make_polynomial_tail(alpha);
  }
  throw std::invalid_argument("unknown tail kind");
}

}  // namespace gdlab
