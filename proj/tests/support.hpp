#pragma once

#include <cmath>

#include "bellmetric/operator.hpp"

namespace testing_support {

inline double max_entry(const bellmetric::Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double gap(const bellmetric::Matrix& a, const bellmetric::Matrix& b) {
  return max_entry(a - b);
}

inline bellmetric::Matrix diag(std::initializer_list<double> values) {
  bellmetric::Matrix m = bellmetric::Matrix::Zero(static_cast<int>(values.size()),
                                                  static_cast<int>(values.size()));
  int k = 0;
  for (double v : values) {
    m(k, k) = v;
    ++k;
  }
  return m;
}

inline const double kSqrt2 = std::sqrt(2.0);

}  // namespace testing_support
