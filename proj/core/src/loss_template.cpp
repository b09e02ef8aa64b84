#include "gdlab/loss_template.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace gdlab {

double k_smoothness_factor(int k, double p) {
  if (k < 2) throw std::invalid_argument("k_smoothness_factor: k >= 2 required");
  if (!(p >= 2.0)) throw std::invalid_argument("k_smoothness_factor: p >= 2 required");
  const double p_eff = std::isinf(p) ? static_cast<double>(k) : p;
  return std::pow(static_cast<double>(k), 2.0 / p_eff);
}

double dual_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kPInfinity;
  return p / (p - 1.0);
}

double lq_norm(const Eigen::VectorXd& v, double q) {
  if (std::isinf(q)) return v.lpNorm<Eigen::Infinity>();
  if (q == 1.0) return v.lpNorm<1>();
  if (q == 2.0) return v.norm();
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]), q);
  return std::pow(s, 1.0 / q);
}

LossTemplate::LossTemplate(std::string name, int dim, double p, double beta,
                           TailFunction tail, double sample_lo,
                           double sample_hi)
    : name_(std::move(name)),
      dim_(dim),
      p_(p),
      beta_(beta),
      tail_(std::move(tail)),
      sample_lo_(sample_lo),
      sample_hi_(sample_hi) {
  if (dim_ < 1) throw std::invalid_argument("template dim must be >= 1");
  if (!(p_ >= 2.0)) throw std::invalid_argument("template needs p >= 2");
  if (!(beta_ > 0.0)) throw std::invalid_argument("template needs beta > 0");
}

CrossEntropyTemplate::CrossEntropyTemplate(int dim, double alpha)
    : LossTemplate("cross_entropy(alpha=" + std::to_string(alpha) + ")", dim,
                   kPInfinity, alpha * alpha, make_exponential_tail(alpha)),
      alpha_(alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cross entropy needs alpha > 0");
}

double CrossEntropyTemplate::value(const Eigen::VectorXd& u) const {
  // (1/a) log(1 + sum exp(-a u_j)), shifted by the max exponent; the
  // unshifted branch uses log1p so values survive far into the tail
  double m = 0.0;  // exponent of the implicit "1" term
  for (int j = 0; j < u.size(); ++j) m = std::max(m, -alpha_ * u[j]);
  if (m == 0.0) {
    double s = 0.0;
    for (int j = 0; j < u.size(); ++j) s += std::exp(-alpha_ * u[j]);
    return std::log1p(s) / alpha_;
  }
  double s = std::exp(-m);
  for (int j = 0; j < u.size(); ++j) s += std::exp(-alpha_ * u[j] - m);
  return (m + std::log(s)) / alpha_;
}

Eigen::VectorXd CrossEntropyTemplate::gradient(const Eigen::VectorXd& u) const {
  double val;
  Eigen::VectorXd g(u.size());
  value_and_gradient(u, val, g);
  return g;
}

void CrossEntropyTemplate::value_and_gradient(const Eigen::VectorXd& u,
                                              double& val,
                                              Eigen::VectorXd& grad) const {
  double m = 0.0;
  for (int j = 0; j < u.size(); ++j) m = std::max(m, -alpha_ * u[j]);
  if (m == 0.0) {
    double s = 0.0;
    for (int j = 0; j < u.size(); ++j) {
      grad[j] = std::exp(-alpha_ * u[j]);
      s += grad[j];
    }
    val = std::log1p(s) / alpha_;
    grad /= -(1.0 + s);
    return;
  }
  double s = std::exp(-m);
  for (int j = 0; j < u.size(); ++j) {
    grad[j] = std::exp(-alpha_ * u[j] - m);
    s += grad[j];
  }
  val = (m + std::log(s)) / alpha_;
  grad /= -s;
}

SumUnivariateTemplate::SumUnivariateTemplate(int dim, UnivariatePhi phi)
    : LossTemplate("sum[" + phi.name + "]", dim, 2.0, phi.beta, phi.tail,
                   std::max(-20.0, phi.smooth_from), 20.0),
      phi_(std::move(phi)) {}

double SumUnivariateTemplate::value(const Eigen::VectorXd& u) const {
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += phi_.phi(u[j]);
  return s;
}

Eigen::VectorXd SumUnivariateTemplate::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g(u.size());
  for (int j = 0; j < u.size(); ++j) g[j] = phi_.phi_prime(u[j]);
  return g;
}

void SumUnivariateTemplate::value_and_gradient(const Eigen::VectorXd& u,
                                               double& val,
                                               Eigen::VectorXd& grad) const {
  val = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    val += phi_.phi(u[j]);
    grad[j] = phi_.phi_prime(u[j]);
  }
}

}  // namespace gdlab
