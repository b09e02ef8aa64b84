#include "gdlab/gd.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "gdlab/loss_template.hpp"
#include "gdlab/margin_map.hpp"

namespace gdlab {

void GDConfig::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("GDConfig: eta must be > 0");
  if (T < 1) throw std::invalid_argument("GDConfig: T must be >= 1");
  if (record_every < 1) {
    throw std::invalid_argument("GDConfig: record_every must be >= 1");
  }
}

void GDTrace::write_csv(std::ostream& os) const {
  os << "t,frob_norm,empirical_risk\n";
  char buf[96];
  for (const auto& pt : points) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g\n", pt.t, pt.frob_norm,
                  pt.emp_risk);
    os << buf;
  }
}

double default_step_size(double beta, int k, double p) {
  if (!(beta > 0.0)) throw std::invalid_argument("default_step_size: beta > 0 required");
  return 1.0 / (6.0 * beta * k_smoothness_factor(k, p));
}

namespace {

// Weighted point set with exact duplicates merged (first-occurrence order).
struct WeightedBatch {
  Eigen::MatrixXd xs;   // d x m
  std::vector<int> ys;  // m
  Eigen::VectorXd w;    // m, sums to 1

  static WeightedBatch from_dataset(const Dataset& data) {
    const int d = data.d();
    const int n = data.n();
    std::unordered_map<std::string, int> index;
    index.reserve(n);
    std::vector<int> order;
    std::vector<long> counts;
    std::string key(d * sizeof(double) + sizeof(int), '\0');
    for (int i = 0; i < n; ++i) {
      std::memcpy(key.data(), data.xs.col(i).data(), d * sizeof(double));
      std::memcpy(key.data() + d * sizeof(double), &data.ys[i], sizeof(int));
      auto [it, inserted] = index.emplace(key, static_cast<int>(order.size()));
      if (inserted) {
        order.push_back(i);
        counts.push_back(1);
      } else {
        ++counts[it->second];
      }
    }
    const int m = static_cast<int>(order.size());
    WeightedBatch b;
    b.xs.resize(d, m);
    b.ys.resize(m);
    b.w.resize(m);
    for (int j = 0; j < m; ++j) {
      b.xs.col(j) = data.xs.col(order[j]);
      b.ys[j] = data.ys[order[j]];
      b.w[j] = static_cast<double>(counts[j]) / static_cast<double>(n);
    }
    return b;
  }
};

// Shared evaluation core: risk and optionally the gradient of the weighted
// empirical risk at W. Buffers persist across GD iterations.
class BatchEval {
 public:
  BatchEval(const MulticlassLoss& loss, WeightedBatch batch)
      : loss_(loss),
        batch_(std::move(batch)),
        logits_(loss.k(), batch_.w.size()),
        weighted_glogits_(loss.k(), batch_.w.size()),
        col_(loss.k()),
        u_(loss.k() - 1),
        gu_(loss.k() - 1),
        glog_(loss.k()) {}

  int m() const { return static_cast<int>(batch_.w.size()); }

  double eval(const Eigen::MatrixXd& W, Eigen::MatrixXd* grad) {
    logits_.noalias() = W * batch_.xs;
    const LossTemplate& tmpl = loss_.tmpl();
    double risk = 0.0;
    for (int j = 0; j < m(); ++j) {
      col_ = logits_.col(j);
      d_y_apply_into(col_, batch_.ys[j], u_);
      if (grad) {
        double val;
        tmpl.value_and_gradient(u_, val, gu_);
        risk += batch_.w[j] * val;
        d_y_transpose_apply_into(gu_, batch_.ys[j], glog_);
        weighted_glogits_.col(j) = batch_.w[j] * glog_;
      } else {
        risk += batch_.w[j] * tmpl.value(u_);
      }
    }
    if (grad) grad->noalias() = weighted_glogits_ * batch_.xs.transpose();
    return risk;
  }

 private:
  const MulticlassLoss& loss_;
  WeightedBatch batch_;
  Eigen::MatrixXd logits_, weighted_glogits_;
  Eigen::VectorXd col_, u_, gu_, glog_;
};

void check_dims(const MulticlassLoss& loss, const Dataset& data) {
  if (data.k != loss.k()) {
    throw std::invalid_argument("loss has k=" + std::to_string(loss.k()) +
                                " but dataset has k=" + std::to_string(data.k));
  }
}

}  // namespace

double empirical_risk(const MulticlassLoss& loss, const Eigen::MatrixXd& W,
                      const Dataset& data) {
  check_dims(loss, data);
  if (W.rows() != loss.k() || W.cols() != data.d()) {
    throw std::invalid_argument("empirical_risk: W shape mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    s += loss.value(W * data.xs.col(i), data.ys[i]);
  }
  return s / data.n();
}

Eigen::MatrixXd empirical_risk_gradient(const MulticlassLoss& loss,
                                        const Eigen::MatrixXd& W,
                                        const Dataset& data) {
  check_dims(loss, data);
  if (W.rows() != loss.k() || W.cols() != data.d()) {
    throw std::invalid_argument("empirical_risk_gradient: W shape mismatch");
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(loss.k(), data.d());
  Eigen::VectorXd glog(loss.k());
  double val;
  for (int i = 0; i < data.n(); ++i) {
    loss.value_and_gradient_logits(W * data.xs.col(i), data.ys[i], val, glog);
    g.noalias() += glog * data.xs.col(i).transpose();
  }
  return g / data.n();
}

GDTrace gd_run(const MulticlassLoss& loss, const Dataset& data,
               const GDConfig& config) {
  config.validate();
  data.validate();
  check_dims(loss, data);

  BatchEval eval(loss, WeightedBatch::from_dataset(data));

  const int k = loss.k();
  const int d = data.d();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(k, d);
  Eigen::MatrixXd grad(k, d);

  GDTrace trace;
  trace.config = config;
  trace.points.reserve(config.T / config.record_every + 2);

  for (long t = 1;; ++t) {
    const bool last = (t == config.T);
    const double risk = eval.eval(W, last ? nullptr : &grad);
    if (!std::isfinite(risk)) {
      throw std::runtime_error("gd_run: non-finite empirical risk at t=" +
                               std::to_string(t));
    }
    if ((t - 1) % config.record_every == 0 || last) {
      trace.points.push_back({t, W.norm(), risk});
      if (config.record_snapshots) trace.snapshots.push_back(W);
    }
    if (last) break;
    if (!grad.allFinite()) {
      throw std::runtime_error("gd_run: non-finite gradient at t=" +
                               std::to_string(t));
    }
    W.noalias() -= config.eta * grad;
  }
  trace.final_w = std::move(W);
  return trace;
}

}  // namespace gdlab
