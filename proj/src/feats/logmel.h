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
#include <vector>

#include "feats/audio.h"
#include "feats/feature_matrix.h"

namespace augpipe {

struct MelConfig {
  std::size_t n_mels = 40;
  double win_ms = 25.0;
  double hop_ms = 10.0;
  double fmin = 20.0;
  double fmax = 0.0;        // 0 means Nyquist.
  std::size_t fft_size = 0;  // 0 means the next power of two >= window.
  double log_floor = 1e-10;

  std::size_t window_samples(uint32_t sample_rate) const;
  std::size_t hop_samples(uint32_t sample_rate) const;
  std::size_t resolved_fft_size(uint32_t sample_rate) const;
  double resolved_fmax(uint32_t sample_rate) const;

  /// Throws a config error if the settings are inconsistent for this rate.
  void validate(uint32_t sample_rate) const;
};

/// HTK mel scale: 2595 * log10(1 + hz / 700).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular filters equally spaced on the mel scale between fmin and fmax,
/// with weights computed in the mel domain.
class MelFilterbank {
 public:
  MelFilterbank(const MelConfig& cfg, uint32_t sample_rate);

  std::size_t num_bins() const { return num_bins_; }
  std::size_t num_filters() const { return filters_.size(); }

  /// Center frequency of filter c in Hz.
  double center_hz(std::size_t c) const { return centers_hz_[c]; }

  /// Weight of FFT bin k in filter c.
  double weight(std::size_t c, std::size_t k) const;

  /// out[c] = sum_k weight(c, k) * power[k].
  void apply(const double* power, double* out) const;

 private:
  struct Filter {
    std::size_t first_bin = 0;
    std::vector<double> weights;
  };
  std::size_t num_bins_;
  std::vector<Filter> filters_;
  std::vector<double> centers_hz_;
};

/// Number of frames for len samples: 1 + (len - win) / hop, for len >= win.
std::size_t num_frames(std::size_t len, std::size_t win, std::size_t hop);

/// Log-mel filterbank energies, one row per hop. Each value is
/// ln(max(energy, log_floor)). Throws "audio too short" when the buffer does
/// not cover a single window.
FeatureMatrix extract_logmel(const AudioBuffer& audio, const MelConfig& cfg);

}  // namespace augpipe
