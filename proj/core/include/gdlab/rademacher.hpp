#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gdlab/dataset.hpp"
#include "gdlab/loss.hpp"

namespace gdlab {

// Query for the empirical Rademacher complexity of the localized class
// { (x,y) -> ell(Wx, y) : ||W||_F <= B, empirical_risk(W) <= r }.
struct RademacherQuery {
  Dataset data;
  double B = 1.0;
  double r = std::numeric_limits<double>::infinity();
  int draws = 64;
  int restarts = 8;
  int ascent_steps = 200;
  bool penalty_mode = false;  // soft risk cap instead of scaling projection

  void validate() const;
};

struct RademacherDiagnostics {
  long infeasible_trajectories = 0;  // restarts that never found a feasible W
  long total_trajectories = 0;
};

// Generic constrained maximization used by the estimator: projected gradient
// ascent of `objective` over {||W||_F <= B} intersected with {risk <= r},
// the latter enforced by scaling toward zero (or by penalty). Returns the
// best feasible objective value, -inf if no feasible point was ever seen.
// Step size is 0.1 B / sqrt(steps), with `restarts` random starts.
struct AscentProblem {
  int k = 1, d = 1;
  double B = 1.0;
  double r = std::numeric_limits<double>::infinity();
  std::function<double(const Eigen::MatrixXd&)> objective;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> objective_grad;
  // empirical risk and its gradient; unset means no risk cap
  std::function<double(const Eigen::MatrixXd&)> risk;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> risk_grad;
};

double constrained_sup(const AscentProblem& prob, std::uint64_t seed,
                       int restarts, int steps, bool penalty_mode = false,
                       RademacherDiagnostics* diag = nullptr,
                       Eigen::MatrixXd* best_w = nullptr);

// Monte Carlo estimate: average over `draws` sign vectors of the approximate
// sup of (1/n) sum_i eps_i ell(W x_i, y_i). The inner maximization is a
// lower estimate of the true sup. per_draw, when given, receives the draw
// values (for standard errors).
double estimate_rademacher(const MulticlassLoss& loss,
                           const RademacherQuery& query, std::uint64_t seed,
                           RademacherDiagnostics* diag = nullptr,
                           std::vector<double>* per_draw = nullptr);

// Exact expectation over all 2^n sign patterns; requires n <= 4. The inner
// sup is still the ascent approximation.
double estimate_rademacher_exact(const MulticlassLoss& loss,
                                 const RademacherQuery& query,
                                 std::uint64_t seed,
                                 RademacherDiagnostics* diag = nullptr);

// Estimates over a (B, r) grid with shared sign draws and shared restart
// initializations; maximizers found in dominated cells (smaller B and r) are
// re-evaluated as candidates in larger ones, so the returned matrix is
// monotone nondecreasing in both arguments by construction.
Eigen::MatrixXd rademacher_grid(const MulticlassLoss& loss,
                                const RademacherQuery& base,
                                const std::vector<double>& Bs,
                                const std::vector<double>& rs,
                                std::uint64_t seed);

}  // namespace gdlab
