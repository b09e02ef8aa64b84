#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdlab/distribution.hpp"
#include "gdlab/gd.hpp"
#include "gdlab/loss.hpp"
#include "gdlab/tail.hpp"

namespace gdlab {

// Outcome of one executable lemma check. For inequality checks worst_ratio
// is max(observed / bound) over the sample, so worst_ratio <= 1 iff passed.
// A check whose preconditions do not apply reports skipped_precondition
// instead of failing.
struct CheckReport {
  std::string name;
  bool passed = true;
  bool skipped_precondition = false;
  double worst_ratio = 0.0;
  std::string witness;  // offending input, empty when passed
  long samples_used = 0;
};

void write_reports_json(const std::vector<CheckReport>& reports,
                        std::ostream& os);

// ||grad(u)||_q^2 <= 2 beta value(u) on sampled u from the template's box.
// beta_override replaces the declared constant (falsification hook).
CheckReport check_self_bounding(const LossTemplate& tmpl, long samples,
                                std::uint64_t seed, double beta_override = 0.0);

// (value(u) - value(v))^2 <= 6 beta max{value(u), value(v)} ||u - v||_p^2.
CheckReport check_diff_self_bound(const LossTemplate& tmpl, long pairs,
                                  std::uint64_t seed,
                                  double beta_override = 0.0);

// ||grad_W ell(W) - grad_W ell(W')||_F <= 3 beta k^{2/p} ||W - W'||_F over
// sampled (W, W', x, y) with ||x||_2 <= 1; p = infinity mapped to p = k.
CheckReport estimate_grad_lipschitz_W(const MulticlassLoss& loss, long samples,
                                      std::uint64_t seed, int d = 6,
                                      double bound_override = 0.0);

// Full class-membership suite for the loss template: nonnegativity, midpoint
// convexity, sampled L_p smoothness, tail domination on the positive orthant
// and decay along positive rays with multipliers {1, 10, 100, 1000}.
CheckReport check_template_membership(const MulticlassLoss& loss, long samples,
                                      std::uint64_t seed);

// Tail-function definition on a grid: nonnegative, 1-Lipschitz, beta-smooth,
// convex, strictly decreasing to 0, rho(0) >= 1, |rho'(0)| >= 1/2, and
// rho(rho^{-1}(eps)) = eps to 1e-10 relative.
CheckReport check_tail_invariants(const TailFunction& tail, long samples,
                                  std::uint64_t seed);

// W*_eps = (rho^{-1}(eps/k) / gamma) W*; its certificate margins guarantee
// empirical risk <= eps on any sample from dist, which is verified on the
// support before returning. Requires 0 < eps < 1/2.
Eigen::MatrixXd comparator_model(const FiniteSupportDistribution& dist,
                                 double epsilon, const TailFunction& tail);

// L_hat(W_T) <= 6 k^{2/p} beta ||W*_eps||_F^2 / T + 2 eps, for the default
// step size. Smaller steps are checked against the general form
// ||W*_eps||^2/(eta T) + 2 eps; larger steps report skipped_precondition.
CheckReport check_opt_error(const GDTrace& trace,
                            const Eigen::MatrixXd& comparator, double beta,
                            int k, double p, double epsilon);

// ||W_t||_F <= 2||W*_eps||_F + 2 sqrt(eta eps t) at every recorded t, and
// ||W_t - W*_eps||_F <= ||W*_eps||_F + 2 sqrt(eta eps t) wherever iterates
// are available (all snapshots, else the final iterate). Requires
// eta <= 1/(6 beta k^{2/p}); larger steps report skipped_precondition.
CheckReport check_norm_bound(const GDTrace& trace,
                             const Eigen::MatrixXd& comparator, double eta,
                             double epsilon, double beta, int k, double p);

// For a sum-univariate loss on data labeled entirely with class 0, rows
// 1..k-1 of every recorded iterate agree to 1e-12. Needs snapshots.
CheckReport check_row_equality(const GDTrace& trace, const Dataset& data,
                               const MulticlassLoss& loss);

// population risk minus empirical risk; the generalization gap a bound of
// the form L <= 2 L_hat + terms is tested against.
double gen_gap(const MulticlassLoss& loss, const Eigen::MatrixXd& W,
               const Dataset& data, const FiniteSupportDistribution& dist);

struct VerifyOptions {
  long samples = 10000;
  std::uint64_t seed = 74;
  bool include_gd_checks = true;
};

// The full checker battery over the shipped losses and GD runs, plus the
// falsification battery (each checker run against a deliberately broken
// input, reported as passed when it correctly fails).
std::vector<CheckReport> run_verify_suite(const VerifyOptions& options = {});
std::vector<CheckReport> run_falsification_suite(std::uint64_t seed = 75);

}  // namespace gdlab
