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
#include <span>
#include <string>
#include <vector>

#include "common/rng.h"
#include "feats/feature_matrix.h"

namespace augpipe {

/// One utterance after the full processing chain.
struct ProcessedUtterance {
  std::string id;
  FeatureMatrix features;
  std::vector<int32_t> tokens;
};

struct Batch {
  std::vector<ProcessedUtterance> items;  // descending frame count
  std::size_t feature_pad_len = 0;
  std::size_t token_pad_len = 0;
  std::size_t total_tokens = 0;
};

/// Greedy token-budget grouping over `token_lengths` in the given order.
/// An item joins the open group unless that would push the group past
/// `budget`; an item over budget on its own forms a singleton group. Returns
/// index groups that partition [0, n).
std::vector<std::vector<std::size_t>> plan_batches(
    std::span<const std::size_t> token_lengths, std::size_t budget);

/// Batches the utterances (consumed) in the given order.
std::vector<Batch> make_batches(std::vector<ProcessedUtterance> utterances,
                                std::size_t token_budget);

/// Seeded Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng);

// ABB1 batch stream: "ABB1", u32 batch count; per batch u32 item count; per
// item u32 T', u32 D', T'*D' f32 row-major values, u32 token count, u32 token
// ids. All little endian.

/// Incremental ABB1 writer. The batch count is patched on finish(), so the
/// stream must be seekable.
class Abb1Writer {
 public:
  explicit Abb1Writer(std::ostream& out);
  void write(const Batch& batch);
  void finish();
  std::size_t batches_written() const { return count_; }

 private:
  std::ostream& out_;
  std::streampos count_pos_;
  std::size_t count_ = 0;
};

/// Reads a whole ABB1 stream. Item ids are not stored and come back empty.
std::vector<Batch> read_abb1(std::istream& in);
std::vector<Batch> read_abb1(const std::string& path);

}  // namespace augpipe
