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

#include "pipeline/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "common/error.h"
#include "common/parallel.h"
#include "common/rng.h"
#include "feats/audio.h"
#include "feats/logmel.h"
#include "pipeline/manifest.h"
#include "subseq/subseq.h"

namespace augpipe {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Adds the time spent in the enclosing scope to *slot, when slot is non-null.
class ScopedTimer {
 public:
  explicit ScopedTimer(double* slot) : slot_(slot), t0_(Clock::now()) {}
  ~ScopedTimer() {
    if (slot_) *slot_ += seconds_since(t0_);
  }

 private:
  double* slot_;
  Clock::time_point t0_;
};

[[noreturn]] void rethrow_with_id(const std::string& id, const Error& e) {
  throw Error(e.kind(), "utterance '" + id + "': " + e.what());
}

}  // namespace

OpTimes& OpTimes::operator+=(const OpTimes& o) {
  load += o.load;
  normalize += o.normalize;
  subseq += o.subseq;
  stretch += o.stretch;
  mask += o.mask;
  stack += o.stack;
  return *this;
}

double OpTimes::total() const {
  return load + normalize + subseq + stretch + mask + stack;
}

void Abb1StreamSink::begin() { writer_.emplace(out_); }

void Abb1StreamSink::consume(Batch&& batch) { writer_->write(batch); }

void Abb1StreamSink::finish() { writer_->finish(); }

void Abb1FileSink::begin() {
  tmp_path_ = path_ + ".partial";
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw_input("cannot open '" + tmp_path_ + "' for writing");
  writer_.emplace(out_);
}

void Abb1FileSink::consume(Batch&& batch) { writer_->write(batch); }

void Abb1FileSink::finish() {
  writer_->finish();
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_path_, path_, ec);
  if (ec) throw_input("cannot move batch file into place: " + ec.message());
}

void Abb1FileSink::fail(const std::string&) {
  if (out_.is_open()) out_.close();
  if (!tmp_path_.empty()) std::remove(tmp_path_.c_str());
}

void BatchQueue::consume(Batch&& batch) {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return queue_.size() < capacity_; });
  queue_.push_back(std::move(batch));
  cv_.notify_all();
}

void BatchQueue::finish() {
  std::lock_guard<std::mutex> lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

void BatchQueue::fail(const std::string& what) {
  std::lock_guard<std::mutex> lock(mu_);
  closed_ = true;
  error_ = what.empty() ? "pipeline failed" : what;
  cv_.notify_all();
}

std::optional<Batch> BatchQueue::pop() {
  std::unique_lock<std::mutex> lock(mu_);
  cv_.wait(lock, [&] { return !queue_.empty() || closed_; });
  if (!error_.empty()) throw std::runtime_error(error_);
  if (queue_.empty()) return std::nullopt;
  Batch b = std::move(queue_.front());
  queue_.pop_front();
  cv_.notify_all();
  return b;
}

std::string RunSummary::to_json() const {
  nlohmann::json j;
  j["utterances"] = utterances;
  j["batches"] = batches;
  j["frames_in"] = frames_in;
  j["frames_out"] = frames_out;
  j["audio_seconds"] = audio_seconds;
  j["wall_seconds"] = wall_seconds;
  j["frames_per_second"] = frames_per_second;
  j["op_seconds"] = {{"load", ops.load},       {"normalize", ops.normalize},
                     {"subseq", ops.subseq},   {"stretch", ops.stretch},
                     {"mask", ops.mask},       {"stack", ops.stack}};
  return j.dump(2);
}

FeatureMatrix load_features(const Utterance& utt, const MelConfig& mel) {
  FeatureMatrix feats;
  if (!utt.feature_path.empty()) {
    feats = read_fmb1(utt.feature_path);
    feats.set_frame_shift_ms(mel.hop_ms);
  } else if (!utt.audio_path.empty()) {
    feats = extract_logmel(read_wav(utt.audio_path), mel);
  } else {
    throw_input("no audio or feature path");
  }
  if (utt.frame_range) {
    feats = feats.slice_rows(utt.frame_range->first, utt.frame_range->second);
  }
  return feats;
}

void materialize(std::vector<Utterance>& utts, const PipelineConfig& cfg,
                 const std::string& base_dir) {
  std::map<std::string, AlignmentMap> files;
  for (Utterance& u : utts) {
    u.audio_path = resolve_path(base_dir, u.audio_path);
    u.feature_path = resolve_path(base_dir, u.feature_path);
    u.alignment_path = resolve_path(base_dir, u.alignment_path);
    if (u.alignment || u.alignment_path.empty() || u.is_subsequence()) continue;
    auto it = files.find(u.alignment_path);
    if (it == files.end()) {
      it = files.emplace(u.alignment_path,
                         read_alignments(u.alignment_path, cfg.mel.hop_ms)).first;
    }
    auto found = it->second.find(u.id);
    if (found == it->second.end()) {
      throw_input("utterance '" + u.id + "': no alignment in '" +
                  u.alignment_path + "'");
    }
    u.alignment = found->second;
  }

  parallel_for(utts.size(), cfg.workers, [&](std::size_t i, std::size_t) {
    Utterance& u = utts[i];
    try {
      if (!u.features) u.features = load_features(u, cfg.mel);
      if (u.alignment) {
        u.alignment->clamp_to(u.features->rows());
        u.alignment->validate(u.features->rows(), u.tokens);
      }
    } catch (const Error& e) {
      rethrow_with_id(u.id, e);
    }
  });
}

StatsMap corpus_stats(const std::vector<Utterance>& utts) {
  std::set<std::string> with_original;
  for (const Utterance& u : utts) {
    if (!u.is_subsequence()) with_original.insert(u.conversation_id);
  }
  std::vector<std::pair<std::string, const FeatureMatrix*>> refs;
  for (const Utterance& u : utts) {
    if (!u.features) throw_input("utterance '" + u.id + "' not materialized");
    if (u.is_subsequence() && with_original.count(u.conversation_id)) continue;
    refs.emplace_back(u.conversation_id, &*u.features);
  }
  return accumulate_stats(refs);
}

ProcessedUtterance process_utterance(const Utterance& utt,
                                     const PipelineConfig& cfg,
                                     const StatsMap& stats, OpTimes* times) {
  try {
    FeatureMatrix feats;
    {
      ScopedTimer timer(times ? &times->load : nullptr);
      feats = utt.features ? *utt.features : load_features(utt, cfg.mel);
    }
    {
      ScopedTimer timer(times ? &times->normalize : nullptr);
      auto it = stats.find(utt.conversation_id);
      if (it == stats.end()) {
        throw_input("no statistics for conversation '" + utt.conversation_id + "'");
      }
      normalize_inplace(feats, it->second);
    }

    std::vector<int32_t> tokens = utt.tokens;
    if (cfg.subseq && cfg.subseq->mode == SubseqMode::kDynamic) {
      ScopedTimer timer(times ? &times->subseq : nullptr);
      if (!utt.alignment) throw_input("sub-sequence sampling requires alignment");
      Rng rng = rng_for(cfg.seed, utt.id, cfg.epoch, "subseq");
      if (auto sub = choose_subsequence(feats.rows(), *utt.alignment, *cfg.subseq, rng)) {
        feats = feats.slice_rows(sub->start, sub->end);
        tokens = utt.alignment->tokens_between(sub->first_entry, sub->last_entry);
      }
    }

    if (cfg.stretch) {
      ScopedTimer timer(times ? &times->stretch : nullptr);
      Rng rng = rng_for(cfg.seed, utt.id, cfg.epoch, "stretch");
      feats = time_stretch(feats, *cfg.stretch, rng);
    }
    if (cfg.mask) {
      ScopedTimer timer(times ? &times->mask : nullptr);
      Rng rng = rng_for(cfg.seed, utt.id, cfg.epoch, "mask");
      apply_masks(feats, draw_masks(feats.rows(), feats.cols(), *cfg.mask, rng),
                  cfg.mask->mask_value);
    }

    ProcessedUtterance out;
    out.id = utt.id;
    out.tokens = std::move(tokens);
    {
      ScopedTimer timer(times ? &times->stack : nullptr);
      out.features = cfg.stack_k == 1 ? std::move(feats) : stack_frames(feats, cfg.stack_k);
    }
    return out;
  } catch (const Error& e) {
    rethrow_with_id(utt.id, e);
  }
}

std::vector<std::size_t> epoch_order(const std::vector<ProcessedUtterance>& utts,
                                     const PipelineConfig& cfg) {
  Rng rng = Rng(cfg.seed).split("shuffle").split(cfg.epoch);
  std::vector<std::size_t> order = shuffled_order(utts.size(), rng);
  if (cfg.length_sort) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return utts[a].features.rows() > utts[b].features.rows();
    });
  }
  return order;
}

RunSummary run_pipeline(const PipelineConfig& cfg, std::vector<Utterance> manifest,
                        BatchSink& sink, const std::string& base_dir) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunSummary summary;
  sink.begin();
  try {
    materialize(manifest, cfg, base_dir);
    const StatsMap stats = corpus_stats(manifest);
    if (cfg.subseq && cfg.subseq->mode == SubseqMode::kStatic) {
      manifest = expand_static(manifest, Rng(cfg.seed).split("static"));
    }

    std::vector<ProcessedUtterance> processed(manifest.size());
    std::vector<OpTimes> worker_times(std::max<std::size_t>(1, cfg.workers));
    parallel_for(manifest.size(), cfg.workers, [&](std::size_t i, std::size_t w) {
      processed[i] = process_utterance(manifest[i], cfg, stats, &worker_times[w]);
    });
    for (const OpTimes& t : worker_times) summary.ops += t;

    summary.utterances = manifest.size();
    for (const Utterance& u : manifest) summary.frames_in += u.features->rows();
    for (const ProcessedUtterance& p : processed) summary.frames_out += p.features.rows();
    summary.audio_seconds = summary.frames_in * cfg.mel.hop_ms / 1000.0;

    const std::vector<std::size_t> order = epoch_order(processed, cfg);
    std::vector<ProcessedUtterance> ordered;
    ordered.reserve(processed.size());
    for (std::size_t i : order) ordered.push_back(std::move(processed[i]));
    for (Batch& b : make_batches(std::move(ordered), cfg.token_budget)) {
      sink.consume(std::move(b));
      ++summary.batches;
    }
    sink.finish();
  } catch (const std::exception& e) {
    sink.fail(e.what());
    throw;
  }
  summary.wall_seconds = seconds_since(t0);
  summary.frames_per_second =
      summary.wall_seconds > 0 ? summary.frames_in / summary.wall_seconds : 0.0;
  return summary;
}

}  // namespace augpipe
