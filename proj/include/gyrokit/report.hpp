#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gyrokit/gyrovector.hpp"

namespace gyrokit {

struct NamedValue {
  std::string name;
  std::vector<double> values;

  friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

struct Counterexample {
  std::vector<NamedValue> inputs;
  double residual = 0.0;
  double threshold = 0.0;

  const std::vector<double>* find(const std::string& name) const {
    for (const auto& nv : inputs) {
      if (nv.name == name) return &nv.values;
    }
    return nullptr;
  }

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

/// Outcome of a seeded randomized property run.
///
/// Every sample contributes a residual and the threshold it is judged
/// against (thresholds may scale with the sample, e.g. by gamma factors).
/// `worst_ratio` is the largest residual/threshold seen; the run passes iff
/// no sample exceeded its threshold.
struct PropertyReport {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t samples_run = 0;
  bool passed = true;
  double max_residual = 0.0;
  double worst_ratio = 0.0;
  std::optional<Counterexample> first_counterexample;
  std::optional<Counterexample> worst_case;

  /// `inputs` is only invoked when the sample has to be remembered.
  template <typename MakeInputs>
  bool observe(double residual, double threshold, MakeInputs&& inputs) {
    ++samples_run;
    const bool ok = residual <= threshold;  // NaN fails
    const double ratio =
        threshold > 0.0 ? residual / threshold
                        : (residual > 0.0 ? HUGE_VAL : 0.0);
    const bool new_worst =
        !worst_case || std::isnan(residual) || ratio > worst_ratio;
    if (std::isnan(residual)) {
      max_residual = residual;
    } else if (!std::isnan(max_residual)) {
      max_residual = std::max(max_residual, residual);
    }
    if (new_worst || (!ok && !first_counterexample)) {
      Counterexample ce{inputs(), residual, threshold};
      if (!ok && !first_counterexample) first_counterexample = ce;
      if (new_worst) {
        worst_ratio = std::isnan(residual) ? HUGE_VAL : ratio;
        worst_case = std::move(ce);
      }
    }
    if (!ok) passed = false;
    return ok;
  }

  /// Folds another report's samples into this one.
  void merge(const PropertyReport& other) {
    samples_run += other.samples_run;
    passed = passed && other.passed;
    if (std::isnan(other.max_residual) || other.max_residual > max_residual) {
      max_residual = other.max_residual;
    }
    if (!first_counterexample && other.first_counterexample) {
      first_counterexample = other.first_counterexample;
    }
    if (other.worst_case && (!worst_case || other.worst_ratio > worst_ratio)) {
      worst_ratio = other.worst_ratio;
      worst_case = other.worst_case;
    }
  }

  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

inline NamedValue named(std::string name, const GyroVector& v) {
  return {std::move(name), v.to_vector()};
}

inline NamedValue named(std::string name, double x) {
  return {std::move(name), {x}};
}

}  // namespace gyrokit
