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

#include <string>
#include <vector>

#include "pipeline/config.h"
#include "pipeline/utterance.h"

namespace augpipe {

// Single-core throughput benchmark. Two rows are measured: "baseline" (the
// config with every augmentation disabled, i.e. I/O + normalization +
// stacking) and "configured". Each row re-runs the per-utterance chain,
// features loaded from disk every pass, until half of `duration_seconds` has
// elapsed (at least one pass).
//
// Report shape:
//
//   {"schema": "augpipe-bench/1", "duration_seconds": d, "rows": [
//     {"name": "baseline" | "configured", "passes": n, "utterances": n,
//      "frames": n, "audio_seconds": s, "wall_seconds": s,
//      "frames_per_second": x, "real_time_factor": x,
//      "ops_seconds_total": s,
//      "ops": {"<op>": {"seconds": s, "frames_per_second": x,
//                       "real_time_factor": x}, ...}}]}
//
// <op> is one of load, normalize, subseq, stretch, mask, stack.
// real_time_factor is audio seconds processed per wall second (720 means the
// chain runs 720 times faster than real time).
std::string run_bench(const PipelineConfig& cfg, std::vector<Utterance> manifest,
                      const std::string& base_dir, double duration_seconds);

}  // namespace augpipe
