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

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "feats/normalize.h"
#include "pipeline/batching.h"
#include "pipeline/config.h"
#include "pipeline/utterance.h"

namespace augpipe {

/// Seconds spent per stage. Summed over workers, so with several workers
/// this is CPU time rather than wall time.
struct OpTimes {
  double load = 0;
  double normalize = 0;
  double subseq = 0;
  double stretch = 0;
  double mask = 0;
  double stack = 0;

  OpTimes& operator+=(const OpTimes& o);
  double total() const;
};

class BatchSink {
 public:
  virtual ~BatchSink() = default;
  virtual void begin() {}
  virtual void consume(Batch&& batch) = 0;
  virtual void finish() {}
  /// Called instead of finish() when the run aborts.
  virtual void fail(const std::string& /*what*/) {}
};

/// Streams ABB1 to a seekable stream.
class Abb1StreamSink : public BatchSink {
 public:
  explicit Abb1StreamSink(std::ostream& out) : out_(out) {}
  void begin() override;
  void consume(Batch&& batch) override;
  void finish() override;

 private:
  std::ostream& out_;
  std::optional<Abb1Writer> writer_;
};

/// Writes ABB1 to `path`, replacing any existing file on success only.
class Abb1FileSink : public BatchSink {
 public:
  explicit Abb1FileSink(std::string path) : path_(std::move(path)) {}
  void begin() override;
  void consume(Batch&& batch) override;
  void finish() override;
  void fail(const std::string& what) override;

 private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  std::optional<Abb1Writer> writer_;
};

class CollectingSink : public BatchSink {
 public:
  void consume(Batch&& batch) override { batches.push_back(std::move(batch)); }
  std::vector<Batch> batches;
};

/// Bounded hand-off to a consumer running on another thread. pop() blocks
/// until a batch is available and returns nullopt once the run has finished
/// and the queue is drained. If the run fails, pop() throws.
class BatchQueue : public BatchSink {
 public:
  explicit BatchQueue(std::size_t capacity = 4) : capacity_(capacity) {}
  void consume(Batch&& batch) override;
  void finish() override;
  void fail(const std::string& what) override;
  std::optional<Batch> pop();

 private:
  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Batch> queue_;
  bool closed_ = false;
  std::string error_;
};

struct RunSummary {
  std::size_t utterances = 0;
  std::size_t batches = 0;
  std::size_t frames_in = 0;   // before augmentation and stacking
  std::size_t frames_out = 0;  // rows emitted
  double audio_seconds = 0;
  double wall_seconds = 0;
  double frames_per_second = 0;
  OpTimes ops;

  std::string to_json() const;
};

/// Loads (or extracts) the features of one utterance and applies its frame
/// range. Paths must already be resolved.
FeatureMatrix load_features(const Utterance& utt, const MelConfig& mel);

/// Resolves relative paths against `base_dir`, loads alignment files, and
/// materializes features for every utterance in parallel. Alignments already
/// attached are kept. Every alignment is clipped to its utterance and checked
/// against its tokens.
void materialize(std::vector<Utterance>& utts, const PipelineConfig& cfg,
                 const std::string& base_dir);

/// Per-conversation stats over original (non sub-sequence) entries. A
/// conversation that only appears through sub-sequence entries uses those.
StatsMap corpus_stats(const std::vector<Utterance>& utts);

/// Stage chain: load -> normalize -> sub-sequence (dynamic) -> stretch ->
/// mask -> stack. Each stage draws from its own rng_for(seed, id, epoch, tag)
/// stream. Errors carry the utterance id.
ProcessedUtterance process_utterance(const Utterance& utt,
                                     const PipelineConfig& cfg,
                                     const StatsMap& stats,
                                     OpTimes* times = nullptr);

/// Full run for cfg.epoch: materialize, stats, static expansion when
/// configured, parallel processing with in-order reassembly, seeded shuffle,
/// greedy batching, emission to `sink`. Output bytes depend only on
/// (config, manifest, seed, epoch), never on cfg.workers.
RunSummary run_pipeline(const PipelineConfig& cfg, std::vector<Utterance> manifest,
                        BatchSink& sink, const std::string& base_dir = "");

/// Utterance order used for batching in `epoch`.
std::vector<std::size_t> epoch_order(const std::vector<ProcessedUtterance>& utts,
                                     const PipelineConfig& cfg);

}  // namespace augpipe
