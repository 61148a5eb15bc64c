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

#include <cstdint>
#include <random>
#include <string_view>

namespace augpipe {

/// 64-bit FNV-1a over raw bytes. Stable across platforms and runs, unlike
/// std::hash.
uint64_t fnv1a64(std::string_view bytes);

/// SplitMix64 finalizer.
uint64_t mix64(uint64_t x);

/// Deterministic random stream.
///
/// Built on std::mt19937_64, whose output sequence is fixed by the standard.
/// The distribution helpers below are written out explicitly because the
/// std:: distributions are implementation-defined and would break
/// cross-platform reproducibility.
///
/// split() derives a child from the construction key only, never from the
/// current stream position, so children are independent of how many draws the
/// parent has already made.
class Rng {
 public:
  explicit Rng(uint64_t key) : key_(key), engine_(mix64(key)) {}

  uint64_t key() const { return key_; }

  Rng split(std::string_view tag) const;
  Rng split(uint64_t tag) const;

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// low + (high - low) * u, the same formula Python's random.uniform uses.
  double uniform(double low, double high);

  /// Uniform integer in the closed range [0, max_inclusive]. Unbiased.
  uint64_t uniform_int(uint64_t max_inclusive);

  /// True with probability p (u < p), so p == 0 never fires and p == 1 always
  /// does.
  bool bernoulli(double p) { return next_unit() < p; }

 private:
  uint64_t key_;
  std::mt19937_64 engine_;
};

/// Stream for one (utterance, epoch, operation) triple. Pure function of its
/// arguments.
Rng rng_for(uint64_t seed, std::string_view utterance_id, uint64_t epoch,
            std::string_view op_tag);

}  // namespace augpipe
