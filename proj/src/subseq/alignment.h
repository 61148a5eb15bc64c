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
#include <map>
#include <span>
#include <string>
#include <vector>

namespace augpipe {

/// One aligned word: its label tokens and the frames [start_frame, end_frame).
struct AlignmentEntry {
  std::vector<int32_t> tokens;
  std::size_t start_frame = 0;
  std::size_t end_frame = 0;

  friend bool operator==(const AlignmentEntry&, const AlignmentEntry&) = default;
};

struct WordAlignment {
  std::vector<AlignmentEntry> entries;

  /// Throws unless entries are sorted, non-overlapping, non-empty, inside
  /// [0, frames), and their tokens concatenate to `tokens`.
  void validate(std::size_t frames, std::span<const int32_t> tokens) const;

  /// Tokens of entries first..last inclusive.
  std::vector<int32_t> tokens_between(std::size_t first, std::size_t last) const;

  /// Clips end frames to `frames`. Word end times routinely overshoot the
  /// last analysis frame by a hop or two. Throws if a word starts past the end.
  void clamp_to(std::size_t frames);

  friend bool operator==(const WordAlignment&, const WordAlignment&) = default;
};

using AlignmentMap = std::map<std::string, WordAlignment>;

// Alignment files hold one word per line:
//
//   <utterance_id> <tokens> <start_seconds> <duration_seconds>
//
// <tokens> is the word's label ids joined by commas ("17" or "17,230,5").
// Lines of one utterance must be sorted by start time. Blank lines and lines
// starting with ';' or '#' are ignored. Times map to frames by rounding
// seconds * 1000 / frame_shift_ms to the nearest integer.
AlignmentMap read_alignments(std::istream& in, double frame_shift_ms);
AlignmentMap read_alignments(const std::string& path, double frame_shift_ms);

}  // namespace augpipe
