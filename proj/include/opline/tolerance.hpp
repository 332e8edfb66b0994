#pragma once

#include <string>

#include "opline/errors.hpp"

namespace opline {

/// Shared numerical tolerances.
///
/// rank_tol is relative to the largest singular value of whatever matrix is
/// being rank-decided; angle_tol is an absolute angle in radians used for
/// subspace comparisons.
struct TolerancePolicy {
  double rank_tol = 1e-10;
  double angle_tol = 1e-8;

  void validate() const {
    if (!(rank_tol > 0.0 && rank_tol < 1.0))
      fail(errc::bad_argument, "rank_tol must lie in (0,1), got " + std::to_string(rank_tol));
    if (!(angle_tol > 0.0 && angle_tol < 1.0))
      fail(errc::bad_argument, "angle_tol must lie in (0,1), got " + std::to_string(angle_tol));
  }
};

}  // namespace opline
