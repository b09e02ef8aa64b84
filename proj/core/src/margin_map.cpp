#include "gdlab/margin_map.hpp"

#include <stdexcept>
#include <string>

namespace gdlab {

namespace {
void check_index(int k, int y) {
  if (k < 2) {
    throw std::invalid_argument("margin map needs k >= 2, got k=" +
                                std::to_string(k));
  }
  if (y < 0 || y >= k) {
    throw std::out_of_range("class index " + std::to_string(y) +
                            " outside [0, " + std::to_string(k) + ")");
  }
}
}  // namespace

Eigen::VectorXd d_y_apply(const Eigen::VectorXd& v, int y) {
  const int k = static_cast<int>(v.size());
  check_index(k, y);
  Eigen::VectorXd out(k - 1);
  d_y_apply_into(v, y, out);
  return out;
}

void d_y_apply_into(const Eigen::VectorXd& v, int y, Eigen::VectorXd& out) {
  const int k = static_cast<int>(v.size());
  const double vy = v[y];
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    if (j == y) continue;
    out[idx++] = vy - v[j];
  }
}

Eigen::VectorXd d_y_transpose_apply(const Eigen::VectorXd& g, int y) {
  const int k = static_cast<int>(g.size()) + 1;
  check_index(k, y);
  Eigen::VectorXd out(k);
  d_y_transpose_apply_into(g, y, out);
  return out;
}

void d_y_transpose_apply_into(const Eigen::VectorXd& g, int y,
                              Eigen::VectorXd& out) {
  const int k = static_cast<int>(g.size()) + 1;
  double sum = 0.0;
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    if (j == y) continue;
    const double gj = g[idx++];
    out[j] = -gj;
    sum += gj;
  }
  out[y] = sum;
}

}  // namespace gdlab
