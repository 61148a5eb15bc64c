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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "feats/feature_matrix.h"

namespace augpipe {

/// Per-channel population moments pooled over every frame of a conversation.
struct ConversationStats {
  std::string conversation_id;
  std::vector<double> mean;
  std::vector<double> variance;
  std::size_t frame_count = 0;
};

using StatsMap = std::map<std::string, ConversationStats>;

/// Exact two-pass mean and population variance per conversation.
///
/// Matrices belonging to one conversation are put in a canonical order before
/// summing, so the result is bit-identical under any permutation of the input.
/// Throws if a conversation has no frames or dimensions disagree.
StatsMap accumulate_stats(
    const std::vector<std::pair<std::string, const FeatureMatrix*>>& features);

/// Convenience overload for owned matrices.
StatsMap accumulate_stats(
    const std::vector<std::pair<std::string, FeatureMatrix>>& features);

/// out = (in - mean) / sqrt(variance + eps).
FeatureMatrix normalize(const FeatureMatrix& features,
                        const ConversationStats& stats, double eps = 1e-8);

/// In-place variant used on the hot path.
void normalize_inplace(FeatureMatrix& features, const ConversationStats& stats,
                       double eps = 1e-8);

/// Stacks k consecutive frames into one row of width k*D. The last group is
/// zero padded when T is not a multiple of k.
FeatureMatrix stack_frames(const FeatureMatrix& features, std::size_t k = 4);

}  // namespace augpipe
