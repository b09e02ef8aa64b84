#include "gdlab/rademacher.hpp"

#include <cmath>
#include <stdexcept>

#include "gdlab/rng.hpp"

namespace gdlab {

void RademacherQuery::validate() const {
  if (!(B >= 0.0)) throw std::invalid_argument("RademacherQuery: B >= 0 required");
  if (!(r >= 0.0)) throw std::invalid_argument("RademacherQuery: r >= 0 required");
  if (draws < 1) throw std::invalid_argument("RademacherQuery: draws >= 1 required");
  if (restarts < 1 || ascent_steps < 1) {
    throw std::invalid_argument("RademacherQuery: restarts and steps must be >= 1");
  }
  data.validate();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool risk_feasible(const AscentProblem& prob, const Eigen::MatrixXd& W) {
  if (!prob.risk || prob.r == kInf) return true;
  return prob.risk(W) <= prob.r * (1.0 + 1e-9) + 1e-15;
}

void project(const AscentProblem& prob, Eigen::MatrixXd& W, bool penalty) {
  const double norm = W.norm();
  if (norm > prob.B) {
    if (prob.B <= 0.0) {
      W.setZero();
    } else {
      W *= prob.B / norm;
    }
  }
  if (penalty || !prob.risk || prob.r == kInf) return;
  if (prob.risk(W) <= prob.r) return;
  // scale toward zero; the maximizer inflates the risk by anti-aligning, so
  // shrinking brings it back. If even zero violates the cap, leave W and let
  // the feasibility filter reject it.
  if (prob.risk(Eigen::MatrixXd::Zero(W.rows(), W.cols())) > prob.r) return;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (prob.risk(mid * W) <= prob.r) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  W *= lo;
}

}  // namespace

double constrained_sup(const AscentProblem& prob, std::uint64_t seed,
                       int restarts, int steps, bool penalty_mode,
                       RademacherDiagnostics* diag, Eigen::MatrixXd* best_w) {
  RandomStream rng(seed);
  const double step = 0.1 * prob.B / std::sqrt(static_cast<double>(steps));
  double best = -kInf;

  for (int restart = 0; restart < restarts; ++restart) {
    Eigen::MatrixXd W(prob.k, prob.d);
    for (int r0 = 0; r0 < prob.k; ++r0) {
      W.row(r0) = rng.gaussian_vector(prob.d).transpose();
    }
    const double target = prob.B * rng.uniform();
    const double nrm = W.norm();
    W = (nrm > 1e-300) ? Eigen::MatrixXd(W * (target / nrm))
                       : Eigen::MatrixXd::Zero(prob.k, prob.d);
    project(prob, W, penalty_mode);

    bool any_feasible = false;
    auto consider = [&](const Eigen::MatrixXd& cand) {
      if (cand.norm() <= prob.B * (1.0 + 1e-9) && risk_feasible(prob, cand)) {
        const double obj = prob.objective(cand);
        if (obj > best) {
          best = obj;
          if (best_w) *best_w = cand;
        }
        any_feasible = true;
      }
    };
    consider(W);
    for (int s = 0; s < steps; ++s) {
      Eigen::MatrixXd g = prob.objective_grad(W);
      if (penalty_mode && prob.risk && prob.r != kInf) {
        const double excess = prob.risk(W) - prob.r;
        if (excess > 0.0) g -= 100.0 * prob.risk_grad(W);
      }
      W += step * g;
      project(prob, W, penalty_mode);
      consider(W);
    }
    if (diag) {
      ++diag->total_trajectories;
      if (!any_feasible) ++diag->infeasible_trajectories;
    }
  }
  return best;
}

namespace {

AscentProblem make_loss_problem(const MulticlassLoss& loss, const Dataset& data,
                                const std::vector<double>& signs, double B,
                                double r) {
  AscentProblem prob;
  prob.k = loss.k();
  prob.d = data.d();
  prob.B = B;
  prob.r = r;
  const int n = data.n();
  const double inv_n = 1.0 / n;
  prob.objective = [&loss, &data, signs, inv_n, n](const Eigen::MatrixXd& W) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += signs[i] * loss.value(W * data.xs.col(i), data.ys[i]);
    }
    return s * inv_n;
  };
  prob.objective_grad = [&loss, &data, signs, inv_n,
                         n](const Eigen::MatrixXd& W) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(W.rows(), W.cols());
    Eigen::VectorXd glog(W.rows());
    double val;
    for (int i = 0; i < n; ++i) {
      loss.value_and_gradient_logits(W * data.xs.col(i), data.ys[i], val, glog);
      g.noalias() += signs[i] * glog * data.xs.col(i).transpose();
    }
    return Eigen::MatrixXd(g * inv_n);
  };
  prob.risk = [&loss, &data, inv_n, n](const Eigen::MatrixXd& W) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += loss.value(W * data.xs.col(i), data.ys[i]);
    }
    return s * inv_n;
  };
  prob.risk_grad = [&loss, &data, inv_n, n](const Eigen::MatrixXd& W) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(W.rows(), W.cols());
    Eigen::VectorXd glog(W.rows());
    double val;
    for (int i = 0; i < n; ++i) {
      loss.value_and_gradient_logits(W * data.xs.col(i), data.ys[i], val, glog);
      g.noalias() += glog * data.xs.col(i).transpose();
    }
    return Eigen::MatrixXd(g * inv_n);
  };
  return prob;
}

std::vector<double> draw_signs(int n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> signs(n);
  for (int i = 0; i < n; ++i) signs[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
  return signs;
}

std::vector<double> mask_signs(int n, unsigned mask) {
  std::vector<double> signs(n);
  for (int i = 0; i < n; ++i) signs[i] = (mask >> i) & 1u ? 1.0 : -1.0;
  return signs;
}

}  // namespace

double estimate_rademacher(const MulticlassLoss& loss,
                           const RademacherQuery& query, std::uint64_t seed,
                           RademacherDiagnostics* diag,
                           std::vector<double>* per_draw) {
  query.validate();
  if (loss.k() != query.data.k) {
    throw std::invalid_argument("estimate_rademacher: loss/data k mismatch");
  }
  double total = 0.0;
  for (int d = 0; d < query.draws; ++d) {
    const auto signs =
        draw_signs(query.data.n(), derive_seed(seed, d, 0x51));
    const auto prob =
        make_loss_problem(loss, query.data, signs, query.B, query.r);
    double sup = constrained_sup(prob, derive_seed(seed, d, 0xa5),
                                 query.restarts, query.ascent_steps,
                                 query.penalty_mode, diag);
    if (sup == -kInf) sup = 0.0;  // empty localized class for this query
    total += sup;
    if (per_draw) per_draw->push_back(sup);
  }
  return total / query.draws;
}

double estimate_rademacher_exact(const MulticlassLoss& loss,
                                 const RademacherQuery& query,
                                 std::uint64_t seed,
                                 RademacherDiagnostics* diag) {
  query.validate();
  const int n = query.data.n();
  if (n > 4) {
    throw std::invalid_argument(
        "estimate_rademacher_exact: exact sign enumeration needs n <= 4");
  }
  const unsigned patterns = 1u << n;
  double total = 0.0;
  for (unsigned mask = 0; mask < patterns; ++mask) {
    const auto signs = mask_signs(n, mask);
    const auto prob =
        make_loss_problem(loss, query.data, signs, query.B, query.r);
    double sup = constrained_sup(prob, derive_seed(seed, mask, 0xe1),
                                 query.restarts, query.ascent_steps,
                                 query.penalty_mode, diag);
    if (sup == -kInf) sup = 0.0;
    total += sup;
  }
  return total / patterns;
}

Eigen::MatrixXd rademacher_grid(const MulticlassLoss& loss,
                                const RademacherQuery& base,
                                const std::vector<double>& Bs,
                                const std::vector<double>& rs,
                                std::uint64_t seed) {
  base.validate();
  for (size_t i = 1; i < Bs.size(); ++i) {
    if (Bs[i] < Bs[i - 1]) throw std::invalid_argument("rademacher_grid: Bs must ascend");
  }
  for (size_t i = 1; i < rs.size(); ++i) {
    if (rs[i] < rs[i - 1]) throw std::invalid_argument("rademacher_grid: rs must ascend");
  }
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(Bs.size(), rs.size());

  for (int d = 0; d < base.draws; ++d) {
    const auto signs = draw_signs(base.data.n(), derive_seed(seed, d, 0x51));
    // candidate pool: best maximizers from dominated cells, always feasible
    // in any cell with larger B and r, which makes the grid monotone as
    // long as each cell's feasible set is nonempty. The zero model seeds
    // the pool so every cell with r >= risk(0) shares a common baseline.
    std::vector<Eigen::MatrixXd> pool;
    pool.push_back(Eigen::MatrixXd::Zero(loss.k(), base.data.d()));
    for (size_t bi = 0; bi < Bs.size(); ++bi) {
      for (size_t ri = 0; ri < rs.size(); ++ri) {
        auto prob = make_loss_problem(loss, base.data, signs, Bs[bi], rs[ri]);
        Eigen::MatrixXd best_w;
        double sup = constrained_sup(prob, derive_seed(seed, d, 0xa5),
                                     base.restarts, base.ascent_steps,
                                     base.penalty_mode, nullptr, &best_w);
        for (const auto& cand : pool) {
          if (cand.norm() <= Bs[bi] * (1.0 + 1e-9) && risk_feasible(prob, cand)) {
            const double obj = prob.objective(cand);
            if (obj > sup) {
              sup = obj;
              best_w = cand;
            }
          }
        }
        if (sup == -kInf) sup = 0.0;
        values(bi, ri) += sup;
        if (best_w.size() > 0) pool.push_back(best_w);
      }
    }
  }
  values /= base.draws;
  return values;
}

}  // namespace gdlab
