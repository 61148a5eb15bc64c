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

#include "pipeline/bench.h"

#include <chrono>

#include <json.hpp>

#include "common/error.h"
#include "pipeline/pipeline.h"

namespace augpipe {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

json op_entry(double seconds, double frames, double audio_seconds) {
  return {{"seconds", seconds},
          {"frames_per_second", seconds > 0 ? frames / seconds : 0.0},
          {"real_time_factor", seconds > 0 ? audio_seconds / seconds : 0.0}};
}

json measure(const std::string& name, const PipelineConfig& cfg,
             const std::vector<Utterance>& utts, const StatsMap& stats,
             double budget_seconds) {
  std::size_t passes = 0;
  std::size_t frames = 0;
  OpTimes ops;
  const auto t0 = Clock::now();
  double wall = 0;
  do {
    for (const Utterance& u : utts) {
      process_utterance(u, cfg, stats, &ops);
    }
    ++passes;
    wall = std::chrono::duration<double>(Clock::now() - t0).count();
  } while (wall < budget_seconds);

  for (const Utterance& u : utts) {
    frames += u.frame_range ? u.frame_range->second - u.frame_range->first : 0;
  }
  const double total_frames = static_cast<double>(frames) * passes;
  const double audio = total_frames * cfg.mel.hop_ms / 1000.0;

  json row;
  row["name"] = name;
  row["passes"] = passes;
  row["utterances"] = utts.size();
  row["frames"] = total_frames;
  row["audio_seconds"] = audio;
  row["wall_seconds"] = wall;
  row["frames_per_second"] = wall > 0 ? total_frames / wall : 0.0;
  row["real_time_factor"] = wall > 0 ? audio / wall : 0.0;
  row["ops_seconds_total"] = ops.total();
  row["ops"] = {{"load", op_entry(ops.load, total_frames, audio)},
                {"normalize", op_entry(ops.normalize, total_frames, audio)},
                {"subseq", op_entry(ops.subseq, total_frames, audio)},
                {"stretch", op_entry(ops.stretch, total_frames, audio)},
                {"mask", op_entry(ops.mask, total_frames, audio)},
                {"stack", op_entry(ops.stack, total_frames, audio)}};
  return row;
}

}  // namespace

std::string run_bench(const PipelineConfig& cfg, std::vector<Utterance> manifest,
                      const std::string& base_dir, double duration_seconds) {
  cfg.validate();
  if (!(duration_seconds >= 0.0)) throw_config("bench duration must be >= 0");
  materialize(manifest, cfg, base_dir);
  const StatsMap stats = corpus_stats(manifest);
  if (cfg.subseq && cfg.subseq->mode == SubseqMode::kStatic) {
    manifest = expand_static(manifest, Rng(cfg.seed).split("static"));
  }
  // Drop materialized features so every pass pays for I/O, but record each
  // entry's frame range so the frame accounting is exact.
  for (Utterance& u : manifest) {
    if (!u.frame_range) u.frame_range = std::make_pair(std::size_t{0}, u.features->rows());
    u.features.reset();
  }

  PipelineConfig baseline = cfg;
  baseline.stretch.reset();
  baseline.mask.reset();
  baseline.subseq.reset();

  json report;
  report["schema"] = "augpipe-bench/1";
  report["duration_seconds"] = duration_seconds;
  report["rows"] = json::array();
  report["rows"].push_back(measure("baseline", baseline, manifest, stats,
                                   duration_seconds / 2));
  report["rows"].push_back(measure("configured", cfg, manifest, stats,
                                   duration_seconds / 2));
  return report.dump(2);
}

}  // namespace augpipe
