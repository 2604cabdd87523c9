#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "errid/params.hpp"

namespace errid {

struct GradCheckIssue {
  std::string param;
  int coord = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::int64_t coords_checked = 0;
  std::vector<GradCheckIssue> worst;  // descending by rel_err, capped
  bool ok(double tolerance) const { return max_rel_err <= tolerance; }
};

// Central-difference check of every (or a sampled subset of) parameter
// coordinate against the analytic gradient produced by `backward`.
//
//   forward  -> loss under the current store values, no side effects
//   backward -> zero grads, then populate store gradients for that loss
//
// rel err = |analytic - numeric| / max(1, |analytic|, |numeric|).
// Failures are reported, not thrown.
GradCheckReport grad_check(ParameterStore& store, const std::function<double()>& forward,
                           const std::function<void()>& backward, double epsilon,
                           double tolerance, int samples_per_param = -1,
                           std::mt19937_64* rng = nullptr);

}  // namespace errid
