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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "common/rng.h"
#include "pipeline/utterance.h"
#include "subseq/alignment.h"

namespace augpipe {

// Sub-sequence sampling cuts an utterance at word boundaries into a prefix
// (same start), a suffix (same end) or an infix (strictly inside), each at
// least half as long as the original in frames.

enum class SubseqVariant { kPrefix = 0, kSuffix = 1, kInfix = 2 };

inline constexpr std::array<SubseqVariant, 3> kAllVariants = {
    SubseqVariant::kPrefix, SubseqVariant::kSuffix, SubseqVariant::kInfix};

std::string_view variant_name(SubseqVariant v);

enum class SubseqMode { kDynamic, kStatic };

struct SubseqPolicy {
  double alpha = 0.0;
  SubseqMode mode = SubseqMode::kDynamic;
  double min_fraction = 0.5;

  void validate() const;
};

struct SubSequence {
  SubseqVariant variant = SubseqVariant::kPrefix;
  std::size_t start = 0;  // frames [start, end)
  std::size_t end = 0;
  std::size_t first_entry = 0;  // alignment entries [first_entry, last_entry]
  std::size_t last_entry = 0;

  friend bool operator==(const SubSequence&, const SubSequence&) = default;
};

/// Minimum sub-sequence length: ceil(min_fraction * frames).
std::size_t min_subseq_frames(std::size_t frames, double min_fraction = 0.5);

/// Every proper sub-sequence of the given variant, ordered by
/// (first_entry, last_entry). A candidate spans entries i..j with frames
/// [start_i, end_j); it qualifies when its length is >= the minimum, < frames,
/// and its boundaries match the variant (prefix start 0, suffix end == frames,
/// infix start > 0 and end < frames).
std::vector<SubSequence> enumerate_candidates(std::size_t frames,
                                              const WordAlignment& align,
                                              SubseqVariant variant,
                                              double min_fraction = 0.5);

/// One dynamic-mode draw: Bernoulli(alpha), then a uniform variant, then a
/// uniform candidate. Returns nullopt when the utterance is kept, including
/// when the drawn variant has no candidates.
std::optional<SubSequence> choose_subsequence(std::size_t frames,
                                              const WordAlignment& align,
                                              const SubseqPolicy& policy,
                                              Rng& rng);

/// Restricts an utterance to a sub-sequence: features (when materialized),
/// tokens, alignment and frame range are all cut consistently.
Utterance slice_utterance(const Utterance& utt, const SubSequence& sub);

/// Dynamic-mode replacement. Requires an alignment and materialized features.
Utterance sample_subsequence(const Utterance& utt, const SubseqPolicy& policy,
                             Rng& rng);

/// Static mode: originals followed, per utterance, by one sub-sequence per
/// feasible variant. The choice for (utterance, variant) depends only on
/// rng.key(), the utterance id and the variant.
///
/// Aligned entries need materialized features, which fix T. Entries without an
/// alignment contribute only themselves.
std::vector<Utterance> expand_static(const std::vector<Utterance>& entries,
                                     const Rng& rng);

/// Name appended to a statically expanded entry's id ("<id>#prefix").
std::string subsequence_id(const std::string& source_id, SubseqVariant v);

}  // namespace augpipe
