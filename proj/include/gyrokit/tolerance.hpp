#pragma once

#include <cmath>
#include <string>

#include "gyrokit/errors.hpp"

namespace gyrokit {

/// Tolerances for every approximate comparison in the library.
///
/// `boundary_margin` guards construction of ball points; `sample_rmax`
/// bounds the radius of randomly sampled points. The two are independent,
/// only `sample_rmax < 1` is required.
struct ToleranceConfig {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double boundary_margin = 1e-9;
  double sample_rmax = 0.999;

  /// Residuals above this are treated as genuine violations rather than noise.
  double decision_threshold() const { return 1e3 * abs_tol; }

  void validate() const {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(abs_tol) || !positive(rel_tol) ||
        !positive(boundary_margin) || !positive(sample_rmax)) {
      throw std::invalid_argument("tolerances must be finite and strictly positive");
    }
    if (sample_rmax >= 1.0) {
      throw std::invalid_argument("sample_rmax must be < 1");
    }
  }
};

inline constexpr double kDefaultBoundaryMargin = 1e-9;

}  // namespace gyrokit
