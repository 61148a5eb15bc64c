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

#pragma once

#include <cstdint>

namespace augpipe {

struct SchedulePolicy {
  double lr_peak = 1e-3;
  uint64_t warmup_steps = 1;
  uint64_t decay_steps = 1;
  double decay_factor = 0.8;
};

/// Learning rate at `step`: linear warm-up to lr_peak over warmup_steps, then
/// linear decay reaching zero at total_steps, times
/// decay_factor ^ floor(step / decay_steps). Clamped at zero.
double lr_schedule(uint64_t step, const SchedulePolicy& policy,
                   uint64_t total_steps);

}  // namespace augpipe
