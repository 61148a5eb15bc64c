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

#include "subseq/subseq.h"

#include <cmath>
#include <string>

#include "common/error.h"

namespace augpipe {
namespace {

bool variant_accepts(SubseqVariant v, std::size_t start, std::size_t end,
                     std::size_t frames) {
  switch (v) {
    case SubseqVariant::kPrefix:
      return start == 0;
    case SubseqVariant::kSuffix:
      return end == frames;
    case SubseqVariant::kInfix:
      return start > 0 && end < frames;
  }
  return false;
}

std::size_t frames_of(const Utterance& utt) {
  if (!utt.features) {
    throw_input("utterance '" + utt.id + "' has no materialized features");
  }
  return utt.features->rows();
}

}  // namespace

std::string_view variant_name(SubseqVariant v) {
  switch (v) {
    case SubseqVariant::kPrefix:
      return "prefix";
    case SubseqVariant::kSuffix:
      return "suffix";
    case SubseqVariant::kInfix:
      return "infix";
  }
  return "unknown";
}

void SubseqPolicy::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw_config("sub-sequence alpha must lie in [0, 1]");
  }
  if (!(min_fraction > 0.0 && min_fraction <= 1.0)) {
    throw_config("sub-sequence min_fraction must lie in (0, 1]");
  }
}

std::size_t min_subseq_frames(std::size_t frames, double min_fraction) {
  return static_cast<std::size_t>(
      std::ceil(min_fraction * static_cast<double>(frames)));
}

std::vector<SubSequence> enumerate_candidates(std::size_t frames,
                                              const WordAlignment& align,
                                              SubseqVariant variant,
                                              double min_fraction) {
  const std::size_t min_len = min_subseq_frames(frames, min_fraction);
  const auto& e = align.entries;
  std::vector<SubSequence> out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::size_t start = e[i].start_frame;
    for (std::size_t j = i; j < e.size(); ++j) {
      const std::size_t end = e[j].end_frame;
      const std::size_t len = end - start;
      if (len < min_len || len >= frames) continue;
      if (!variant_accepts(variant, start, end, frames)) continue;
      out.push_back({variant, start, end, i, j});
    }
  }
  return out;
}

std::optional<SubSequence> choose_subsequence(std::size_t frames,
                                              const WordAlignment& align,
                                              const SubseqPolicy& policy,
                                              Rng& rng) {
  policy.validate();
  if (!rng.bernoulli(policy.alpha)) return std::nullopt;
  const auto variant = kAllVariants[rng.uniform_int(kAllVariants.size() - 1)];
  const auto candidates =
      enumerate_candidates(frames, align, variant, policy.min_fraction);
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.uniform_int(candidates.size() - 1)];
}

Utterance slice_utterance(const Utterance& utt, const SubSequence& sub) {
  if (!utt.alignment) {
    throw_input("sub-sequence sampling requires alignment");
  }
  Utterance out = utt;
  const WordAlignment& align = *utt.alignment;
  out.tokens = align.tokens_between(sub.first_entry, sub.last_entry);

  WordAlignment sliced;
  for (std::size_t i = sub.first_entry; i <= sub.last_entry; ++i) {
    AlignmentEntry e = align.entries[i];
    e.start_frame -= sub.start;
    e.end_frame -= sub.start;
    sliced.entries.push_back(std::move(e));
  }
  out.alignment = std::move(sliced);

  if (utt.features) out.features = utt.features->slice_rows(sub.start, sub.end);
  const std::size_t base = utt.frame_range ? utt.frame_range->first : 0;
  out.frame_range = std::make_pair(base + sub.start, base + sub.end);
  if (out.source_id.empty()) out.source_id = utt.id;
  return out;
}

Utterance sample_subsequence(const Utterance& utt, const SubseqPolicy& policy,
                             Rng& rng) {
  if (!utt.alignment) {
    throw_input("sub-sequence sampling requires alignment");
  }
  const auto sub = choose_subsequence(frames_of(utt), *utt.alignment, policy, rng);
  if (!sub) return utt;
  return slice_utterance(utt, *sub);
}

std::string subsequence_id(const std::string& source_id, SubseqVariant v) {
  return source_id + "#" + std::string(variant_name(v));
}

std::vector<Utterance> expand_static(const std::vector<Utterance>& entries,
                                     const Rng& rng) {
  std::vector<Utterance> out;
  out.reserve(entries.size() * 4);
  for (const Utterance& utt : entries) out.push_back(utt);
  for (const Utterance& utt : entries) {
    if (!utt.alignment) continue;
    const std::size_t frames = frames_of(utt);
    for (SubseqVariant v : kAllVariants) {
      const auto candidates = enumerate_candidates(frames, *utt.alignment, v);
      if (candidates.empty()) continue;
      Rng pick = rng.split(utt.id).split(variant_name(v));
      Utterance sub =
          slice_utterance(utt, candidates[pick.uniform_int(candidates.size() - 1)]);
      sub.id = subsequence_id(utt.id, v);
      out.push_back(std::move(sub));
    }
  }
  return out;
}

}  // namespace augpipe
