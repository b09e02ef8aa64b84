#include "gdlab/dataset.hpp"

#include <iostream>
#include <stdexcept>
#include <string>

namespace gdlab {

void Dataset::validate() const {
  if (n() == 0) throw std::invalid_argument("dataset is empty");
  if (static_cast<int>(ys.size()) != n()) {
    throw std::invalid_argument("dataset: label count does not match xs");
  }
  if (k < 2) throw std::invalid_argument("dataset: k >= 2 required");
  for (int i = 0; i < n(); ++i) {
    if (ys[i] < 0 || ys[i] >= k) {
      throw std::invalid_argument("dataset: label " + std::to_string(ys[i]) +
                                  " at index " + std::to_string(i) +
                                  " outside [0, " + std::to_string(k) + ")");
    }
  }
  double worst = 0.0;
  for (int i = 0; i < n(); ++i) worst = std::max(worst, xs.col(i).norm());
  if (worst > 1.0 + 1e-9) {
    std::cerr << "warning: dataset has ||x||_2 up to " << worst
              << " > 1, scaling assumption violated\n";
  }
}

}  // namespace gdlab
