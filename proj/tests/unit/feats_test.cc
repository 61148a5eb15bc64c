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

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "common/error.h"
#include "feats/audio.h"
#include "feats/feature_matrix.h"
#include "feats/logmel.h"
#include "oracles.h"
#include "test_util.h"

namespace augpipe {
namespace {

FeatureMatrix read_text_matrix(const std::string& path) {
  std::ifstream in(path);
  std::size_t rows = 0, cols = 0;
  in >> rows >> cols;
  FeatureMatrix m(rows, cols);
  for (double& v : m.values()) in >> v;
  return m;
}

AudioBuffer mono(std::vector<int16_t> samples, uint32_t rate = 8000) {
  AudioBuffer a;
  a.samples = std::move(samples);
  a.sample_rate = rate;
  return a;
}

// ---- audio -------------------------------------------------------------------

TEST(Audio, ReadsPcmWrittenByHand) {
  testutil::TempDir dir;
  const std::vector<int16_t> samples = {0, 1, -1, 32767, -32768, 1234};
  testutil::write_pcm_wav(dir.file("a.wav"), samples, 16000);
  const AudioBuffer a = read_wav(dir.file("a.wav"));
  EXPECT_EQ(a.sample_rate, 16000u);
  EXPECT_EQ(a.channel_count, 1);
  EXPECT_EQ(a.samples, samples);
}

TEST(Audio, WriteReadRoundTrip) {
  AudioBuffer a = mono(testutil::babble(0.1, 8000, 3));
  std::stringstream ss;
  write_wav(ss, a);
  const AudioBuffer b = read_wav(ss);
  EXPECT_EQ(b.samples, a.samples);
  EXPECT_EQ(b.sample_rate, a.sample_rate);
}

TEST(Audio, RejectsCompressedAndStereo) {
  testutil::TempDir dir;
  testutil::write_pcm_wav(dir.file("a.wav"), {1, 2, 3, 4}, 8000);
  std::string bytes = testutil::read_file(dir.file("a.wav"));
  std::string alaw = bytes;
  alaw[20] = 6;  // WAVE_FORMAT_ALAW
  std::stringstream s1(alaw);
  EXPECT_THROW(read_wav(s1), Error);
  std::string stereo = bytes;
  stereo[22] = 2;
  std::stringstream s2(stereo);
  EXPECT_THROW(read_wav(s2), Error);
  std::stringstream s3("RIFX0000WAVE");
  EXPECT_THROW(read_wav(s3), Error);
}

TEST(Audio, RejectsUnsupportedRate) {
  std::stringstream ss;
  AudioBuffer a = mono({1, 2, 3}, 44100);
  EXPECT_THROW(a.validate(), Error);
}

// ---- feature matrix / FMB1 -------------------------------------------------

TEST(FeatureMatrix, Fmb1RoundTripNarrowsToFloat) {
  FeatureMatrix m(3, 2);
  m(0, 0) = 1.0 / 3.0;
  m(2, 1) = -7.25;
  std::stringstream ss;
  write_fmb1(ss, m);
  EXPECT_EQ(ss.str().substr(0, 4), "FMB1");
  EXPECT_EQ(ss.str().size(), 12u + 6 * 4);
  const FeatureMatrix r = read_fmb1(ss);
  ASSERT_EQ(r.rows(), 3u);
  ASSERT_EQ(r.cols(), 2u);
  EXPECT_EQ(r(0, 0), static_cast<double>(static_cast<float>(1.0 / 3.0)));
  EXPECT_EQ(r(2, 1), -7.25);
}

TEST(FeatureMatrix, Fmb1RejectsTruncation) {
  FeatureMatrix m(4, 4, 1.0);
  std::stringstream ss;
  write_fmb1(ss, m);
  std::string bytes = ss.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_fmb1(cut), Error);
  std::stringstream magic("XMB1" + bytes.substr(4));
  EXPECT_THROW(read_fmb1(magic), Error);
}

TEST(FeatureMatrix, SliceAndGather) {
  FeatureMatrix m(5, 2);
  for (std::size_t t = 0; t < 5; ++t) m(t, 0) = m(t, 1) = static_cast<double>(t);
  const FeatureMatrix s = m.slice_rows(1, 4);
  ASSERT_EQ(s.rows(), 3u);
  EXPECT_EQ(s(0, 0), 1.0);
  const std::vector<std::size_t> idx = {4, 0, 0};
  const FeatureMatrix g = m.gather_rows(idx);
  EXPECT_EQ(g(0, 1), 4.0);
  EXPECT_EQ(g(2, 0), 0.0);
}

// ---- log-mel -----------------------------------------------------------------

TEST(LogMel, SilenceIsFloor) {
  const FeatureMatrix m = extract_logmel(mono(std::vector<int16_t>(8000, 0)), MelConfig{});
  EXPECT_EQ(m.rows(), 98u);
  EXPECT_EQ(m.cols(), 40u);
  for (double v : m.values()) EXPECT_EQ(v, std::log(1e-10));
}

TEST(LogMel, OneWindowGivesOneFrame) {
  const FeatureMatrix m = extract_logmel(mono(testutil::sine(500, 0.025, 8000)), MelConfig{});
  EXPECT_EQ(m.rows(), 1u);
  EXPECT_THROW(extract_logmel(mono(std::vector<int16_t>(199, 1)), MelConfig{}), Error);
}

TEST(LogMel, FrameCountFormula) {
  for (std::size_t len : {200u, 279u, 280u, 281u, 1000u, 8000u, 12345u}) {
    const FeatureMatrix m = extract_logmel(mono(std::vector<int16_t>(len, 3)), MelConfig{});
    EXPECT_EQ(m.rows(), 1 + (len - 200) / 80) << len;
  }
}

TEST(LogMel, MatchesNumpyReference8k) {
  const AudioBuffer a = read_wav(testutil::data_file("chirp_8k.wav"));
  const FeatureMatrix ref = read_text_matrix(testutil::data_file("chirp_8k.logmel.txt"));
  const FeatureMatrix m = extract_logmel(a, MelConfig{});
  ASSERT_EQ(m.rows(), ref.rows());
  ASSERT_EQ(m.cols(), ref.cols());
  for (std::size_t i = 0; i < m.values().size(); ++i) {
    ASSERT_NEAR(m.values()[i], ref.values()[i], 1e-6) << i;
  }
}

TEST(LogMel, MatchesNumpyReference16kCustomBank) {
  const AudioBuffer a = read_wav(testutil::data_file("chirp_16k.wav"));
  const FeatureMatrix ref = read_text_matrix(testutil::data_file("chirp_16k.logmel.txt"));
  MelConfig cfg;
  cfg.n_mels = 23;
  cfg.fmin = 64;
  cfg.fmax = 7000;
  cfg.fft_size = 1024;
  const FeatureMatrix m = extract_logmel(a, cfg);
  ASSERT_EQ(m.rows(), ref.rows());
  ASSERT_EQ(m.cols(), 23u);
  for (std::size_t i = 0; i < m.values().size(); ++i) {
    ASSERT_NEAR(m.values()[i], ref.values()[i], 1e-6) << i;
  }
}

TEST(LogMel, SinePeaksInNearestChannel) {
  const MelConfig cfg;
  const AudioBuffer a = mono(testutil::sine(1000.0, 1.0, 8000));
  const FeatureMatrix m = extract_logmel(a, cfg);

  // Independent check that the spectrum peaks at 1 kHz in a windowed frame.
  const std::size_t win = 200, n_fft = 256;
  std::vector<double> frame(win);
  for (std::size_t n = 0; n < win; ++n) {
    const double w = 0.5 - 0.5 * std::cos(2 * std::numbers::pi * n / (win - 1));
    frame[n] = a.samples[4000 + n] * w;
  }
  const auto mag = oracle::dft_magnitude(frame, n_fft);
  const std::size_t peak_bin = std::max_element(mag.begin(), mag.end()) - mag.begin();
  const double peak_hz = peak_bin * 8000.0 / n_fft;
  EXPECT_NEAR(peak_hz, 1000.0, 8000.0 / n_fft);

  // Channel whose center (computed here from the HTK formula) is nearest.
  const double lo = 2595 * std::log10(1 + 20.0 / 700), hi = 2595 * std::log10(1 + 4000.0 / 700);
  std::size_t nearest = 0;
  double best = 1e9;
  for (std::size_t c = 0; c < 40; ++c) {
    const double mel = lo + (c + 1) * (hi - lo) / 41;
    const double hz = 700 * (std::pow(10, mel / 2595) - 1);
    if (std::abs(hz - peak_hz) < best) {
      best = std::abs(hz - peak_hz);
      nearest = c;
    }
  }
  for (std::size_t t = 1; t + 1 < m.rows(); ++t) {
    const auto row = m.row(t);
    const std::size_t arg = std::max_element(row.begin(), row.end()) - row.begin();
    ASSERT_EQ(arg, nearest) << "frame " << t;
  }
}

TEST(LogMel, FilterbankShape) {
  const MelConfig cfg;
  const MelFilterbank bank(cfg, 8000);
  EXPECT_EQ(bank.num_filters(), 40u);
  EXPECT_EQ(bank.num_bins(), 129u);
  for (std::size_t c = 1; c < 40; ++c) EXPECT_GT(bank.center_hz(c), bank.center_hz(c - 1));
  for (std::size_t c = 0; c < 40; ++c) {
    for (std::size_t k = 0; k < 129; ++k) {
      EXPECT_GE(bank.weight(c, k), 0.0);
      EXPECT_LE(bank.weight(c, k), 1.0);
    }
  }
  EXPECT_NEAR(mel_to_hz(hz_to_mel(1234.5)), 1234.5, 1e-9);
}

TEST(LogMel, ConfigValidation) {
  MelConfig cfg;
  cfg.fmax = 5000;  // above Nyquist at 8 kHz
  EXPECT_THROW(cfg.validate(8000), Error);
  cfg = MelConfig{};
  cfg.hop_ms = 30;
  EXPECT_THROW(cfg.validate(8000), Error);
  cfg = MelConfig{};
  cfg.fft_size = 100;
  EXPECT_THROW(cfg.validate(8000), Error);
  cfg = MelConfig{};
  cfg.n_mels = 0;
  EXPECT_THROW(cfg.validate(8000), Error);
  EXPECT_NO_THROW(MelConfig{}.validate(16000));
}

TEST(LogMel, AllFinite) {
  const FeatureMatrix m = extract_logmel(mono(testutil::babble(0.5, 16000, 9), 16000),
                                         MelConfig{});
  EXPECT_TRUE(m.all_finite());
}

}  // namespace
}  // namespace augpipe
