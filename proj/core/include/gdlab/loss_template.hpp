#pragma once

#include <Eigen/Core>
#include <limits>
#include <memory>
#include <string>

#include "gdlab/phi.hpp"
#include "gdlab/tail.hpp"

namespace gdlab {

inline constexpr double kPInfinity = std::numeric_limits<double>::infinity();

// k^{2/p} with the p = infinity case mapped to p = k, so the factor becomes
// k^{2/k} <= e. Every bound and step-size formula goes through this helper.
double k_smoothness_factor(int k, double p);

// dual exponent: 1/p + 1/q = 1
double dual_exponent(double p);

// ||v||_q for q in [1, inf]
double lq_norm(const Eigen::VectorXd& v, double q);

// Template of a multiclass loss: a convex nonnegative function on R^{k-1}
// evaluated at the margin vector D_y(scores). Declares the norm exponent p
// it is smooth against, its smoothness constant and its decay tail.
class LossTemplate {
 public:
  virtual ~LossTemplate() = default;

  virtual double value(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& u) const = 0;
  virtual void value_and_gradient(const Eigen::VectorXd& u, double& val,
                                  Eigen::VectorXd& grad) const {
    val = value(u);
    grad = gradient(u);
  }

  int dim() const { return dim_; }
  double p() const { return p_; }
  double q() const { return dual_exponent(p_); }
  double beta() const { return beta_; }
  const TailFunction& tail() const { return tail_; }
  const std::string& name() const { return name_; }

  // Box on which the declared smoothness constant holds; sampled invariant
  // checks draw from [sample_lo, sample_hi]^dim.
  double sample_lo() const { return sample_lo_; }
  double sample_hi() const { return sample_hi_; }

 protected:
  LossTemplate(std::string name, int dim, double p, double beta,
               TailFunction tail, double sample_lo = -20.0,
               double sample_hi = 20.0);

 private:
  std::string name_;
  int dim_;
  double p_;
  double beta_;
  TailFunction tail_;
  double sample_lo_, sample_hi_;
};

// (1/alpha) log(1 + sum_j exp(-alpha u_j)); p = inf, beta = alpha^2,
// tail rho(x) = (1/alpha) e^{-alpha x}. Evaluation is overflow-safe for any
// finite input (log-sum-exp with the max exponent subtracted).
class CrossEntropyTemplate final : public LossTemplate {
 public:
  CrossEntropyTemplate(int dim, double alpha);
  double alpha() const { return alpha_; }

  double value(const Eigen::VectorXd& u) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override;
  void value_and_gradient(const Eigen::VectorXd& u, double& val,
                          Eigen::VectorXd& grad) const override;

 private:
  double alpha_;
};

// sum_j phi(u_j); p = 2, beta = phi's beta, tail = phi's tail.
class SumUnivariateTemplate final : public LossTemplate {
 public:
  SumUnivariateTemplate(int dim, UnivariatePhi phi);
  const UnivariatePhi& phi() const { return phi_; }

  double value(const Eigen::VectorXd& u) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override;
  void value_and_gradient(const Eigen::VectorXd& u, double& val,
                          Eigen::VectorXd& grad) const override;

 private:
  UnivariatePhi phi_;
};

}  // namespace gdlab
