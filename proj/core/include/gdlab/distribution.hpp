#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gdlab/dataset.hpp"
#include "gdlab/tail.hpp"

namespace gdlab {

struct SupportPoint {
  Eigen::VectorXd x;
  int y = 0;  // 0-based class label
  double prob = 0.0;
};

// Finite-support separable distribution with an explicit margin certificate:
// ||W*||_F <= 1 and (W*_y - W*_j) . x >= gamma for every support point and
// every j != y. Finite support keeps the population risk exact.
struct FiniteSupportDistribution {
  std::vector<SupportPoint> support;
  int d = 0;
  int k = 0;
  Eigen::MatrixXd certificate;  // k x d
  double gamma = 0.0;

  // Throws std::invalid_argument on any violated invariant (probabilities,
  // norms, certificate margin).
  void validate() const;

  // Structured-text (JSON) round trip for experiment provenance.
  void save(std::ostream& os) const;
  static FiniteSupportDistribution load(std::istream& is);
};

enum class ProbProfile {
  uniform,
  // One high-probability anchor per class plus a geometric ladder of rare
  // points; the shape long-tailed sampling questions need.
  long_tailed,
};

struct RandomSeparableOptions {
  ProbProfile profile = ProbProfile::uniform;
  double ladder_top = 4e-3;     // largest rare-point probability
  double ladder_bottom = 2e-4;  // smallest rare-point probability
};

// Random separable instance. The certificate rows are sampled on a sphere
// and scaled to ||W*||_F = 1; each support direction is sampled uniformly
// and mixed toward (W*_y - W*_{j*}) until its margin clears gamma. Throws
// std::runtime_error if the margin is infeasible after bounded retries.
// Deterministic given the seed.
FiniteSupportDistribution make_random_separable(
    int d, int k, double gamma, int support_size, std::uint64_t seed,
    const RandomSeparableOptions& options = {});

// The three-point instance that forces a sample-size lower bound:
//   x1 = (1, 0, 0)                 w.p. (59/64)(1 - 1/n)
//   x2 = (-1/2, 3 gamma, 0)        w.p. (5/64)(1 - 1/n)
//   x3 = (0, -1/8, 4 gamma + 1/4)  w.p. 1/n
// all labeled class 0, certificate row 0 = (gamma, 1/2, 1/4), rest zero.
// Requires gamma <= 1/8 and n >= 35.
FiniteSupportDistribution make_hard_lower_n(double gamma, long n, int k);

// The two-point instance that forces an iteration-count lower bound:
//   x1 = (1, 0)          w.p. 1 - p
//   x2 = (-1/2, 3 gamma) w.p. p,  p = rho^{-1}(16 eps / k) / (72 gamma^2 T k eta)
// all labeled class 0, certificate row 0 = (gamma, 1/2). Requires
// gamma <= 1/8, eps <= 1/16 and rho^{-1}(16 eps/k)^2 / (gamma^2 eta T) <= eps;
// the infeasibility error reports the violated inequality.
FiniteSupportDistribution make_hard_lower_t(double gamma, int k, double T,
                                            double eta, double epsilon,
                                            const TailFunction& tail);

// n i.i.d. draws; deterministic given the seed.
Dataset sample(const FiniteSupportDistribution& dist, int n,
               std::uint64_t seed);

// sum over the support of prob * loss(W x, y); exact, no sampling.
class MulticlassLoss;
double population_risk_exact(const MulticlassLoss& loss,
                             const Eigen::MatrixXd& W,
                             const FiniteSupportDistribution& dist);

// Smallest margin (W*_y - W*_j) . x over the support; also asserts
// ||W*||_F <= 1 (throws std::invalid_argument when violated).
double margin_certificate_check(const FiniteSupportDistribution& dist);

}  // namespace gdlab
