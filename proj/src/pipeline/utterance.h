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
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "feats/feature_matrix.h"
#include "subseq/alignment.h"

namespace augpipe {

struct Utterance {
  std::string id;
  std::string conversation_id;
  // Exactly one of these is set for manifest entries.
  std::string audio_path;
  std::string feature_path;
  std::vector<int32_t> tokens;
  std::string alignment_path;
  std::optional<WordAlignment> alignment;

  // Rows [first, second) of the source features. Set on statically expanded
  // sub-sequence entries, which share the source's audio or feature file.
  std::optional<std::pair<std::size_t, std::size_t>> frame_range;
  std::string source_id;

  // Materialized lazily by the pipeline.
  std::optional<FeatureMatrix> features;

  bool is_subsequence() const { return frame_range.has_value(); }
};

}  // namespace augpipe
