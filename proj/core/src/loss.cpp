#include "gdlab/loss.hpp"

#include <iostream>
#include <stdexcept>
#include <string>

namespace gdlab {

namespace {
void check_finite(const Eigen::VectorXd& logits) {
  if (!logits.allFinite()) {
    throw std::runtime_error("loss evaluation: non-finite logits");
  }
}
}  // namespace

MulticlassLoss::MulticlassLoss(int k, std::shared_ptr<const LossTemplate> tmpl)
    : k_(k), tmpl_(std::move(tmpl)) {
  if (k_ < 2) throw std::invalid_argument("multiclass loss needs k >= 2");
  if (!tmpl_ || tmpl_->dim() != k_ - 1) {
    throw std::invalid_argument("template dim must equal k - 1");
  }
}

double MulticlassLoss::value(const Eigen::VectorXd& logits, int y) const {
  check_finite(logits);
  return tmpl_->value(d_y_apply(logits, y));
}

Eigen::VectorXd MulticlassLoss::gradient_logits(const Eigen::VectorXd& logits,
                                                int y) const {
  check_finite(logits);
  return d_y_transpose_apply(tmpl_->gradient(d_y_apply(logits, y)), y);
}

void MulticlassLoss::value_and_gradient_logits(const Eigen::VectorXd& logits,
                                               int y, double& val,
                                               Eigen::VectorXd& grad) const {
  check_finite(logits);
  Eigen::VectorXd u = d_y_apply(logits, y);
  Eigen::VectorXd gu(u.size());
  tmpl_->value_and_gradient(u, val, gu);
  grad.resize(k_);
  d_y_transpose_apply_into(gu, y, grad);
}

Eigen::MatrixXd MulticlassLoss::model_gradient(const Eigen::MatrixXd& W,
                                               const Eigen::VectorXd& x,
                                               int y) const {
  if (W.rows() != k_ || W.cols() != x.size()) {
    throw std::invalid_argument(
        "model_gradient: shape mismatch, W is " + std::to_string(W.rows()) +
        "x" + std::to_string(W.cols()) + ", x has length " +
        std::to_string(x.size()));
  }
  if (x.norm() > 1.0 + 1e-9) {
    std::cerr << "warning: ||x||_2 = " << x.norm()
              << " > 1 violates the data scaling assumption\n";
  }
  const Eigen::VectorXd g = gradient_logits(W * x, y);
  return g * x.transpose();
}

MulticlassLoss make_cross_entropy(int k, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cross entropy needs alpha > 0");
  if (k < 2) throw std::invalid_argument("cross entropy needs k >= 2");
  return MulticlassLoss(k, std::make_shared<CrossEntropyTemplate>(k - 1, alpha));
}

MulticlassLoss make_sum_univariate(int k, const UnivariatePhi& phi) {
  if (k < 2) throw std::invalid_argument("sum-univariate loss needs k >= 2");
  return MulticlassLoss(k, std::make_shared<SumUnivariateTemplate>(k - 1, phi));
}

}  // namespace gdlab
