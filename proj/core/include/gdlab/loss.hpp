#pragma once

#include <Eigen/Core>
#include <memory>

#include "gdlab/loss_template.hpp"
#include "gdlab/margin_map.hpp"

namespace gdlab {

// Multiclass loss: ell(scores, y) = template(D_y scores). Immutable value;
// all evaluation methods are pure and thread-safe.
class MulticlassLoss {
 public:
  MulticlassLoss(int k, std::shared_ptr<const LossTemplate> tmpl);

  int k() const { return k_; }
  const LossTemplate& tmpl() const { return *tmpl_; }
  std::shared_ptr<const LossTemplate> tmpl_ptr() const { return tmpl_; }
  const std::string& name() const { return tmpl_->name(); }

  // ell(logits, y); throws on non-finite logits
  double value(const Eigen::VectorXd& logits, int y) const;

  // d ell / d logits, equal to D_y^T grad_template(D_y logits); length k
  Eigen::VectorXd gradient_logits(const Eigen::VectorXd& logits, int y) const;

  void value_and_gradient_logits(const Eigen::VectorXd& logits, int y,
                                 double& val, Eigen::VectorXd& grad) const;

  // gradient w.r.t. the weight matrix of W -> ell(W x, y); k x d, row i is
  // (gradient_logits)_i * x^T. Warns to stderr if ||x|| > 1.
  Eigen::MatrixXd model_gradient(const Eigen::MatrixXd& W,
                                 const Eigen::VectorXd& x, int y) const;

 private:
  int k_;
  std::shared_ptr<const LossTemplate> tmpl_;
};

MulticlassLoss make_cross_entropy(int k, double alpha);
MulticlassLoss make_sum_univariate(int k, const UnivariatePhi& phi);

}  // namespace gdlab
