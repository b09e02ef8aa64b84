#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace gdlab {

// Central-difference gradient, the oracle behind every analytic-gradient
// check: (f(p + h e_i) - f(p - h e_i)) / (2h) per coordinate.
template <class F>
Eigen::VectorXd finite_diff_gradient(F&& f, const Eigen::VectorXd& point,
                                     double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h > 0 required");
  const int m = static_cast<int>(point.size());
  Eigen::VectorXd g(m);
  Eigen::VectorXd p = point;
  for (int i = 0; i < m; ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double fp = f(p);
    p[i] = orig - h;
    const double fm = f(p);
    p[i] = orig;
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw std::runtime_error("finite_diff_gradient: non-finite evaluation");
    }
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace gdlab
