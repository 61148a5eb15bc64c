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
#include <iosfwd>
#include <optional>
#include <string>

#include "augment/spec_augment.h"
#include "augment/time_stretch.h"
#include "feats/logmel.h"
#include "subseq/subseq.h"

namespace augpipe {

struct PipelineConfig {
  MelConfig mel;
  std::optional<StretchPolicy> stretch;
  std::optional<MaskPolicy> mask;
  std::optional<SubseqPolicy> subseq;
  std::size_t stack_k = 1;
  std::size_t token_budget = 8000;
  uint64_t seed = 0;
  std::size_t workers = 1;
  uint64_t epoch = 0;
  // Sort each epoch's shuffled order by frame count before batching.
  bool length_sort = false;

  void validate() const;
};

/// Named settings: "lstm-300h" (stretch w=inf, 2 mask rounds, no stacking)
/// and "attn-300h" (stretch w=inf, 1 mask round, stack 4). Throws a config
/// error for unknown names. Mask widths keep their MaskPolicy defaults here;
/// config files must set them explicitly.
PipelineConfig preset_config(const std::string& name);

// INI-style config file. Top-level keys: preset, seed, workers, epoch,
// token_budget, stack_k, length_sort. Sections [mel], [stretch], [mask],
// [subseq] mirror the policy structs; each policy section takes
// `enabled = true|false`. When masking is enabled, [mask] must set f_max and
// t_max explicitly. `preset_override`, when non-empty, replaces the file's
// preset key.
//
// The AUGPIPE_SEED environment variable, when set, overrides the seed.
PipelineConfig parse_config(std::istream& in, const std::string& preset_override = "");
PipelineConfig load_config(const std::string& path, const std::string& preset_override = "");

/// Applies AUGPIPE_SEED if present. Called by parse_config; exposed for
/// callers that build configs in code.
void apply_env_overrides(PipelineConfig& cfg);

}  // namespace augpipe
