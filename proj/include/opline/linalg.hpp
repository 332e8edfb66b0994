#pragma once

#include <Eigen/Dense>
#include <string>

#include "opline/errors.hpp"

namespace opline {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    fail(errc::nonfinite_entries, std::string(what) + " contains NaN or Inf");
}

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite())
    fail(errc::nonfinite_entries, std::string(what) + " contains NaN or Inf");
}

}  // namespace opline
