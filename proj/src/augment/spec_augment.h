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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "augment/time_stretch.h"
#include "common/rng.h"
#include "feats/feature_matrix.h"

namespace augpipe {

/// Frequency and time masking. `repeats` rounds, each masking one band of up
/// to f_max channels and one band of up to t_max frames.
struct MaskPolicy {
  std::size_t repeats = 1;
  std::size_t f_max = 70;
  std::size_t t_max = 7;
  double mask_value = 0.0;

  void validate() const;
};

enum class MaskAxis { kFrequency, kTime };

struct MaskRect {
  MaskAxis axis = MaskAxis::kFrequency;
  std::size_t drawn_width = 0;  // as sampled, before clamping to the axis
  std::size_t start = 0;
  std::size_t width = 0;  // clamped: start + width <= axis length

  friend bool operator==(const MaskRect&, const MaskRect&) = default;
};

/// Draw order per repeat: f, f0, t, t0. Widths are uniform on [0, max];
/// starts are uniform on [0, axis - width] (0 when the band covers the axis).
std::vector<MaskRect> draw_masks(std::size_t frames, std::size_t dim,
                                 const MaskPolicy& policy, Rng& rng);

void apply_masks(FeatureMatrix& seq, std::span<const MaskRect> masks,
                 double mask_value);

FeatureMatrix spec_augment(const FeatureMatrix& seq, const MaskPolicy& policy,
                           Rng& rng);

/// Everything an input augmentation drew, enough to replay it.
struct AugmentTrace {
  std::optional<StretchPlan> stretch;
  std::vector<MaskRect> masks;
};

struct AugmentResult {
  FeatureMatrix features;
  AugmentTrace trace;
};

/// Stretch then mask, both drawing sequentially from `rng`. Absent policies
/// are skipped without consuming draws.
AugmentResult apply_input_augment_traced(const FeatureMatrix& seq,
                                         const std::optional<StretchPolicy>& stretch,
                                         const std::optional<MaskPolicy>& mask,
                                         Rng& rng);

FeatureMatrix apply_input_augment(const FeatureMatrix& seq,
                                  const std::optional<StretchPolicy>& stretch,
                                  const std::optional<MaskPolicy>& mask,
                                  Rng& rng);

}  // namespace augpipe
