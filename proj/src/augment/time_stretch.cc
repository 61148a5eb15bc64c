/* Copyright 2026 The augpipe Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "augment/time_stretch.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace augpipe {

void StretchPolicy::validate() const {
  if (!(low > 0.0) || !(low <= high) || !std::isfinite(high)) {
    throw_config("stretch range must satisfy 0 < low <= high");
  }
  if (!infinite() && window < 2) {
    throw_config("stretch window must be >= 2 or infinite");
  }
}

std::size_t stretch_draw_count(std::size_t frames,
                               const StretchPolicy& policy) {
  return policy.infinite() ? 1 : frames / policy.window + 1;
}

std::vector<std::size_t> stretch_indices(std::size_t frames, std::size_t window,
                                         std::span<const double> factors) {
  const bool infinite = window == StretchPolicy::kInfinite;
  const std::size_t windows = infinite ? 1 : frames / window + 1;
  if (factors.size() != windows) {
    throw_config("expected " + std::to_string(windows) +
                 " stretch factors, got " + std::to_string(factors.size()));
  }

  std::vector<std::size_t> ids;
  ids.reserve(frames + frames / 4 + 8);
  for (std::size_t i = 0; i < windows; ++i) {
    const double s = factors[i];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw_config("stretch factors must be positive and finite");
    }
    const std::size_t begin = infinite ? 0 : window * i;
    const std::size_t end = infinite ? frames : std::min(frames, window * (i + 1));
    const double start = static_cast<double>(begin);
    const double stop = static_cast<double>(end) - 1.0;

    // numpy.arange: length ceil((stop - start) / step); element 1 is
    // start + step and element k >= 2 is start + k * (x1 - start).
    const double span_len = std::ceil((stop - start) / s);
    if (!(span_len > 0.0)) continue;
    const auto count = static_cast<std::size_t>(span_len);
    const double x1 = start + s;
    const double delta = x1 - start;
    for (std::size_t k = 0; k < count; ++k) {
      const double x = k == 0 ? start : k == 1 ? x1 : start + k * delta;
      // Default FP environment rounds to nearest, ties to even.
      ids.push_back(static_cast<std::size_t>(std::nearbyint(x)));
    }
  }
  return ids;
}

StretchPlan plan_time_stretch(std::size_t frames, const StretchPolicy& policy,
                              Rng& rng) {
  policy.validate();
  StretchPlan plan;
  plan.factors.resize(stretch_draw_count(frames, policy));
  for (double& s : plan.factors) s = rng.uniform(policy.low, policy.high);
  plan.indices = stretch_indices(frames, policy.window, plan.factors);
  return plan;
}

FeatureMatrix time_stretch(const FeatureMatrix& seq,
                           const StretchPolicy& policy, Rng& rng) {
  const StretchPlan plan = plan_time_stretch(seq.rows(), policy, rng);
  return seq.gather_rows(plan.indices);
}

}  // namespace augpipe
