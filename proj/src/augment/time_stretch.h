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
#include <limits>
#include <span>
#include <vector>

#include "common/rng.h"
#include "feats/feature_matrix.h"

namespace augpipe {

/// Dynamic time stretching parameters. Each window of `window` frames is
/// resampled with a factor drawn uniformly from [low, high].
struct StretchPolicy {
  static constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();

  std::size_t window = kInfinite;
  double low = 0.8;
  double high = 1.25;

  bool infinite() const { return window == kInfinite; }
  void validate() const;
};

/// Number of factor draws the stretch consumes for a sequence of T frames:
/// T / window + 1, or 1 for an infinite window. The trailing window is often
/// empty but still consumes a draw.
std::size_t stretch_draw_count(std::size_t frames, const StretchPolicy& policy);

/// Frame indices produced by the nearest-neighbour stretch given one factor
/// per window.
///
/// Window i covers [w*i, e) with e = min(T, w*(i+1)). It emits
/// round_half_even(w*i + k*s) for every k with w*i + k*s < e - 1, so the last
/// frame of each window is never emitted directly. The sample positions are
/// generated exactly as numpy.arange does so results agree bit for bit.
std::vector<std::size_t> stretch_indices(std::size_t frames, std::size_t window,
                                         std::span<const double> factors);

struct StretchPlan {
  std::vector<double> factors;
  std::vector<std::size_t> indices;
};

/// Draws the per-window factors and resolves them to frame indices.
StretchPlan plan_time_stretch(std::size_t frames, const StretchPolicy& policy,
                              Rng& rng);

/// Rows of `seq` gathered by a fresh plan. No values are interpolated.
FeatureMatrix time_stretch(const FeatureMatrix& seq,
                           const StretchPolicy& policy, Rng& rng);

}  // namespace augpipe
