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

#include "feats/logmel.h"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "common/error.h"

namespace augpipe {
namespace {

// FFTW planning is not thread safe; execution with the new-array interface is.
// Plans are created once per size and kept for the process lifetime.
fftw_plan r2c_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(in);
  fftw_free(out);
  plans.emplace(n, plan);
  return plan;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t MelConfig::window_samples(uint32_t sample_rate) const {
  return static_cast<std::size_t>(std::lround(win_ms * sample_rate / 1000.0));
}

std::size_t MelConfig::hop_samples(uint32_t sample_rate) const {
  return static_cast<std::size_t>(std::lround(hop_ms * sample_rate / 1000.0));
}

std::size_t MelConfig::resolved_fft_size(uint32_t sample_rate) const {
  if (fft_size != 0) return fft_size;
  return std::bit_ceil(window_samples(sample_rate));
}

double MelConfig::resolved_fmax(uint32_t sample_rate) const {
  return fmax > 0.0 ? fmax : sample_rate / 2.0;
}

void MelConfig::validate(uint32_t sample_rate) const {
  if (n_mels < 1) throw_config("n_mels must be >= 1");
  if (!(win_ms > 0.0) || !(hop_ms > 0.0)) {
    throw_config("win_ms and hop_ms must be positive");
  }
  if (hop_ms > win_ms) throw_config("hop_ms must not exceed win_ms");
  if (window_samples(sample_rate) < 1 || hop_samples(sample_rate) < 1) {
    throw_config("window or hop shorter than one sample");
  }
  const double hi = resolved_fmax(sample_rate);
  if (!(fmin >= 0.0) || !(fmin < hi) || hi > sample_rate / 2.0) {
    throw_config("mel range must satisfy 0 <= fmin < fmax <= sample_rate/2");
  }
  const std::size_t n = resolved_fft_size(sample_rate);
  if (!is_power_of_two(n) || n < window_samples(sample_rate)) {
    throw_config("fft_size must be a power of two >= window length");
  }
  if (!(log_floor > 0.0)) throw_config("log_floor must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelConfig& cfg, uint32_t sample_rate) {
  const std::size_t n_fft = cfg.resolved_fft_size(sample_rate);
  num_bins_ = n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.resolved_fmax(sample_rate));
  const double delta = (mel_hi - mel_lo) / static_cast<double>(cfg.n_mels + 1);
  const double bin_hz = static_cast<double>(sample_rate) / n_fft;

  filters_.resize(cfg.n_mels);
  centers_hz_.resize(cfg.n_mels);
  for (std::size_t c = 0; c < cfg.n_mels; ++c) {
    const double left = mel_lo + c * delta;
    const double center = left + delta;
    const double right = center + delta;
    centers_hz_[c] = mel_to_hz(center);

    Filter& f = filters_[c];
    std::size_t first = num_bins_;
    std::size_t last = 0;
    std::vector<double> dense(num_bins_, 0.0);
    for (std::size_t k = 0; k < num_bins_; ++k) {
      const double m = hz_to_mel(k * bin_hz);
      if (m <= left || m >= right) continue;
      dense[k] = m <= center ? (m - left) / (center - left)
                             : (right - m) / (right - center);
      first = std::min(first, k);
      last = k;
    }
    if (first < num_bins_) {
      f.first_bin = first;
      f.weights.assign(dense.begin() + first, dense.begin() + last + 1);
    }
  }
}

double MelFilterbank::weight(std::size_t c, std::size_t k) const {
  const Filter& f = filters_[c];
  if (k < f.first_bin || k >= f.first_bin + f.weights.size()) return 0.0;
  return f.weights[k - f.first_bin];
}

void MelFilterbank::apply(const double* power, double* out) const {
  for (std::size_t c = 0; c < filters_.size(); ++c) {
    const Filter& f = filters_[c];
    double acc = 0.0;
    for (std::size_t i = 0; i < f.weights.size(); ++i) {
      acc += f.weights[i] * power[f.first_bin + i];
    }
    out[c] = acc;
  }
}

std::size_t num_frames(std::size_t len, std::size_t win, std::size_t hop) {
  if (len < win) return 0;
  return 1 + (len - win) / hop;
}

FeatureMatrix extract_logmel(const AudioBuffer& audio, const MelConfig& cfg) {
  audio.validate();
  cfg.validate(audio.sample_rate);
  const std::size_t win = cfg.window_samples(audio.sample_rate);
  const std::size_t hop = cfg.hop_samples(audio.sample_rate);
  const std::size_t n_fft = cfg.resolved_fft_size(audio.sample_rate);
  if (audio.samples.size() < win) throw_input("audio too short");

  const std::size_t frames = num_frames(audio.samples.size(), win, hop);
  const MelFilterbank bank(cfg, audio.sample_rate);

  std::vector<double> window(win);
  for (std::size_t n = 0; n < win; ++n) {
    window[n] = win == 1 ? 1.0
                         : 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n /
                                                static_cast<double>(win - 1));
  }

  std::unique_ptr<double, FftwDeleter> in(fftw_alloc_real(n_fft));
  std::unique_ptr<fftw_complex, FftwDeleter> spec(
      fftw_alloc_complex(n_fft / 2 + 1));
  std::vector<double> power(n_fft / 2 + 1);
  std::vector<double> energies(cfg.n_mels);
  const fftw_plan plan = r2c_plan(n_fft);
  const double floor_log = std::log(cfg.log_floor);

  FeatureMatrix out(frames, cfg.n_mels);
  out.set_frame_shift_ms(cfg.hop_ms);
  for (std::size_t t = 0; t < frames; ++t) {
    const int16_t* frame = audio.samples.data() + t * hop;
    double* buf = in.get();
    for (std::size_t n = 0; n < win; ++n) buf[n] = frame[n] * window[n];
    std::fill(buf + win, buf + n_fft, 0.0);
    fftw_execute_dft_r2c(plan, buf, spec.get());
    for (std::size_t k = 0; k < power.size(); ++k) {
      const double re = spec.get()[k][0];
      const double im = spec.get()[k][1];
      power[k] = re * re + im * im;
    }
    bank.apply(power.data(), energies.data());
    auto row = out.row(t);
    for (std::size_t c = 0; c < cfg.n_mels; ++c) {
      row[c] = energies[c] > cfg.log_floor ? std::log(energies[c]) : floor_log;
    }
  }
  return out;
}

}  // namespace augpipe
