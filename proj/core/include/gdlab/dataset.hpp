#pragma once

#include <Eigen/Core>
#include <vector>

namespace gdlab {

// Training sample: columns of xs are the feature vectors, ys the 0-based
// class labels. Invariants: nonempty, labels in [0, k), all ||x||_2 <= 1
// (the last is a warning, not a hard error).
struct Dataset {
  Eigen::MatrixXd xs;  // d x n
  std::vector<int> ys;
  int k = 0;

  int d() const { return static_cast<int>(xs.rows()); }
  int n() const { return static_cast<int>(xs.cols()); }

  // Throws std::invalid_argument on structural violations, warns to stderr
  // when some ||x||_2 exceeds 1.
  void validate() const;
};

}  // namespace gdlab
