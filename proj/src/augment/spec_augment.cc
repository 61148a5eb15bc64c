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

#include "augment/spec_augment.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace augpipe {
namespace {

MaskRect draw_band(MaskAxis axis, std::size_t max_width, std::size_t axis_len,
                   Rng& rng) {
  MaskRect r;
  r.axis = axis;
  r.drawn_width = static_cast<std::size_t>(rng.uniform_int(max_width));
  const std::size_t room = axis_len > r.drawn_width ? axis_len - r.drawn_width : 0;
  r.start = static_cast<std::size_t>(rng.uniform_int(room));
  r.width = std::min(r.drawn_width, axis_len - r.start);
  return r;
}

}  // namespace

void MaskPolicy::validate() const {
  if (!std::isfinite(mask_value)) throw_config("mask value must be finite");
}

std::vector<MaskRect> draw_masks(std::size_t frames, std::size_t dim,
                                 const MaskPolicy& policy, Rng& rng) {
  policy.validate();
  std::vector<MaskRect> masks;
  masks.reserve(2 * policy.repeats);
  for (std::size_t r = 0; r < policy.repeats; ++r) {
    masks.push_back(draw_band(MaskAxis::kFrequency, policy.f_max, dim, rng));
    masks.push_back(draw_band(MaskAxis::kTime, policy.t_max, frames, rng));
  }
  return masks;
}

void apply_masks(FeatureMatrix& seq, std::span<const MaskRect> masks,
                 double mask_value) {
  for (const MaskRect& m : masks) {
    if (m.width == 0) continue;
    if (m.axis == MaskAxis::kFrequency) {
      if (m.start + m.width > seq.cols()) throw_input("frequency mask out of range");
      for (std::size_t t = 0; t < seq.rows(); ++t) {
        auto row = seq.row(t);
        std::fill_n(row.begin() + m.start, m.width, mask_value);
      }
    } else {
      if (m.start + m.width > seq.rows()) throw_input("time mask out of range");
      for (std::size_t t = m.start; t < m.start + m.width; ++t) {
        auto row = seq.row(t);
        std::fill(row.begin(), row.end(), mask_value);
      }
    }
  }
}

FeatureMatrix spec_augment(const FeatureMatrix& seq, const MaskPolicy& policy,
                           Rng& rng) {
  FeatureMatrix out = seq;
  apply_masks(out, draw_masks(seq.rows(), seq.cols(), policy, rng),
              policy.mask_value);
  return out;
}

AugmentResult apply_input_augment_traced(
    const FeatureMatrix& seq, const std::optional<StretchPolicy>& stretch,
    const std::optional<MaskPolicy>& mask, Rng& rng) {
  AugmentResult result;
  if (stretch) {
    StretchPlan plan = plan_time_stretch(seq.rows(), *stretch, rng);
    result.features = seq.gather_rows(plan.indices);
    result.trace.stretch = std::move(plan);
  } else {
    result.features = seq;
  }
  if (mask) {
    result.trace.masks = draw_masks(result.features.rows(),
                                    result.features.cols(), *mask, rng);
    apply_masks(result.features, result.trace.masks, mask->mask_value);
  }
  return result;
}

FeatureMatrix apply_input_augment(const FeatureMatrix& seq,
                                  const std::optional<StretchPolicy>& stretch,
                                  const std::optional<MaskPolicy>& mask,
                                  Rng& rng) {
  return apply_input_augment_traced(seq, stretch, mask, rng).features;
}

}  // namespace augpipe
