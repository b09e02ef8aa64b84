#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gdlab/dataset.hpp"
#include "gdlab/loss.hpp"

namespace gdlab {

struct GDConfig {
  double eta = 0.0;        // step size, > 0
  long T = 1;              // index of the final iterate; T-1 update steps
  long record_every = 1;   // recording stride over t
  std::uint64_t seed = 0;  // diagnostics only; the trajectory is deterministic
  bool record_snapshots = false;  // keep full W_t at recorded iterations

  void validate() const;
};

struct TracePoint {
  long t;
  double frob_norm;
  double emp_risk;
};

// Per-iterate record of a GD run. The first recorded point is always
// (1, 0, risk(0)) since W_1 = 0; the last is t = T. Snapshots, when enabled,
// align with `points`.
struct GDTrace {
  GDConfig config;
  std::vector<TracePoint> points;
  Eigen::MatrixXd final_w;
  std::vector<Eigen::MatrixXd> snapshots;

  double final_risk() const { return points.back().emp_risk; }
  double final_norm() const { return points.back().frob_norm; }

  // CSV with columns t, frob_norm, empirical_risk
  void write_csv(std::ostream& os) const;
};

// eta = 1 / (6 beta k^{2/p}), with p = infinity mapped to p = k.
double default_step_size(double beta, int k, double p);

// (1/n) sum_i ell(W x_i, y_i)
double empirical_risk(const MulticlassLoss& loss, const Eigen::MatrixXd& W,
                      const Dataset& data);

// mean of the per-example model gradients; k x d
Eigen::MatrixXd empirical_risk_gradient(const MulticlassLoss& loss,
                                        const Eigen::MatrixXd& W,
                                        const Dataset& data);

// Full-batch GD on the empirical risk from W_1 = 0. Deterministic and
// single-threaded; identical inputs give bitwise identical traces. Throws
// std::runtime_error naming the offending iteration if the risk or an
// iterate stops being finite.
//
// Exact duplicates in the dataset are merged into weighted points before
// the loop, so finite-support samples with few distinct points run at the
// cost of the support, not the sample.
GDTrace gd_run(const MulticlassLoss& loss, const Dataset& data,
               const GDConfig& config);

}  // namespace gdlab
