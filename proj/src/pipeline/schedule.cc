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

#include "pipeline/schedule.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace augpipe {

double lr_schedule(uint64_t step, const SchedulePolicy& policy,
                   uint64_t total_steps) {
  if (policy.warmup_steps < 1) throw_config("warmup_steps must be >= 1");
  if (policy.decay_steps < 1) throw_config("decay_steps must be >= 1");
  if (!(policy.decay_factor > 0.0 && policy.decay_factor <= 1.0)) {
    throw_config("decay_factor must lie in (0, 1]");
  }
  if (!(policy.lr_peak >= 0.0) || !std::isfinite(policy.lr_peak)) {
    throw_config("lr_peak must be finite and non-negative");
  }
  if (total_steps <= policy.warmup_steps) {
    throw_config("total_steps must exceed warmup_steps");
  }

  const auto s = static_cast<double>(step);
  const auto warm = static_cast<double>(policy.warmup_steps);
  double base;
  if (step <= policy.warmup_steps) {
    base = policy.lr_peak * (s / warm);
  } else {
    const double frac = (s - warm) / (static_cast<double>(total_steps) - warm);
    base = policy.lr_peak * std::max(0.0, 1.0 - frac);
  }
  const auto intervals = static_cast<double>(step / policy.decay_steps);
  return base * std::pow(policy.decay_factor, intervals);
}

}  // namespace augpipe
