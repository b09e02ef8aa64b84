#pragma once

#include <Eigen/Core>

namespace gdlab {

// The margin map D_y sends a score vector v in R^k to the vector of gaps
// (v_y - v_j) for j != y, in ascending j order with the y entry omitted.
// Class indices are 0-based throughout.
Eigen::VectorXd d_y_apply(const Eigen::VectorXd& v, int y);

// Adjoint of d_y_apply: <D_y v, g> = <v, D_y^T g> for all v, g.
// Entry y of the result is sum(g); entry j != y is -g at j's position.
Eigen::VectorXd d_y_transpose_apply(const Eigen::VectorXd& g, int y);

// Allocation-free variants for hot loops. `out` must be presized.
void d_y_apply_into(const Eigen::VectorXd& v, int y, Eigen::VectorXd& out);
void d_y_transpose_apply_into(const Eigen::VectorXd& g, int y,
                              Eigen::VectorXd& out);

}  // namespace gdlab
