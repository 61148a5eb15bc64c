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

#include "feats/normalize.h"

#include <algorithm>
#include <cmath>

#include "common/error.h"

namespace augpipe {
namespace {

// Total order on matrices by content, used to fix the summation order.
bool content_less(const FeatureMatrix* a, const FeatureMatrix* b) {
  if (a->rows() != b->rows()) return a->rows() < b->rows();
  if (a->cols() != b->cols()) return a->cols() < b->cols();
  auto av = a->values();
  auto bv = b->values();
  return std::lexicographical_compare(av.begin(), av.end(), bv.begin(),
                                      bv.end());
}

ConversationStats pooled_moments(const std::string& id,
                                 std::vector<const FeatureMatrix*> mats) {
  std::sort(mats.begin(), mats.end(), content_less);
  const std::size_t dim = mats.front()->cols();
  ConversationStats stats;
  stats.conversation_id = id;
  for (const FeatureMatrix* m : mats) {
    if (m->cols() != dim) {
      throw_input("conversation '" + id + "' mixes feature dimensions " +
                  std::to_string(dim) + " and " + std::to_string(m->cols()));
    }
    stats.frame_count += m->rows();
  }
  if (stats.frame_count == 0) {
    throw_input("conversation '" + id + "' has no frames");
  }
  const double n = static_cast<double>(stats.frame_count);

  stats.mean.assign(dim, 0.0);
  for (const FeatureMatrix* m : mats) {
    for (std::size_t t = 0; t < m->rows(); ++t) {
      auto row = m->row(t);
      for (std::size_t d = 0; d < dim; ++d) stats.mean[d] += row[d];
    }
  }
  for (double& v : stats.mean) v /= n;

  stats.variance.assign(dim, 0.0);
  for (const FeatureMatrix* m : mats) {
    for (std::size_t t = 0; t < m->rows(); ++t) {
      auto row = m->row(t);
      for (std::size_t d = 0; d < dim; ++d) {
        const double diff = row[d] - stats.mean[d];
        stats.variance[d] += diff * diff;
      }
    }
  }
  for (double& v : stats.variance) v /= n;
  return stats;
}

}  // namespace

StatsMap accumulate_stats(
    const std::vector<std::pair<std::string, const FeatureMatrix*>>& features) {
  std::map<std::string, std::vector<const FeatureMatrix*>> groups;
  for (const auto& [conv, mat] : features) groups[conv].push_back(mat);
  StatsMap out;
  for (auto& [conv, mats] : groups) {
    out.emplace(conv, pooled_moments(conv, std::move(mats)));
  }
  return out;
}

StatsMap accumulate_stats(
    const std::vector<std::pair<std::string, FeatureMatrix>>& features) {
  std::vector<std::pair<std::string, const FeatureMatrix*>> refs;
  refs.reserve(features.size());
  for (const auto& [conv, mat] : features) refs.emplace_back(conv, &mat);
  return accumulate_stats(refs);
}

void normalize_inplace(FeatureMatrix& features, const ConversationStats& stats,
                       double eps) {
  const std::size_t dim = features.cols();
  if (stats.mean.size() != dim || stats.variance.size() != dim) {
    throw_input("stats dimension " + std::to_string(stats.mean.size()) +
                " does not match feature dimension " + std::to_string(dim));
  }
  std::vector<double> inv_std(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    inv_std[d] = 1.0 / std::sqrt(stats.variance[d] + eps);
  }
  for (std::size_t t = 0; t < features.rows(); ++t) {
    auto row = features.row(t);
    for (std::size_t d = 0; d < dim; ++d) {
      row[d] = (row[d] - stats.mean[d]) * inv_std[d];
    }
  }
}

FeatureMatrix normalize(const FeatureMatrix& features,
                        const ConversationStats& stats, double eps) {
  FeatureMatrix out = features;
  normalize_inplace(out, stats, eps);
  return out;
}

FeatureMatrix stack_frames(const FeatureMatrix& features, std::size_t k) {
  if (k < 1) throw_config("stack factor must be >= 1");
  const std::size_t rows = features.rows();
  const std::size_t dim = features.cols();
  FeatureMatrix out((rows + k - 1) / k, k * dim, 0.0);
  out.set_frame_shift_ms(features.frame_shift_ms() * static_cast<double>(k));
  // Row-major layout makes stacking a straight copy: input row t lands at
  // offset t*D of the output buffer, and the tail stays zero.
  auto src = features.values();
  std::copy(src.begin(), src.end(), out.values().begin());
  return out;
}

}  // namespace augpipe
