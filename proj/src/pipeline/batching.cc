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

#include "pipeline/batching.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>

#include "common/binary_io.h"
#include "common/error.h"

namespace augpipe {
namespace {

uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<uint32_t>::max()) {
    throw_input(std::string(what) + " does not fit in ABB1's u32 field");
  }
  return static_cast<uint32_t>(v);
}

}  // namespace

std::vector<std::vector<std::size_t>> plan_batches(
    std::span<const std::size_t> token_lengths, std::size_t budget) {
  if (budget < 1) throw_config("token budget must be >= 1");
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> current;
  std::size_t current_tokens = 0;
  for (std::size_t i = 0; i < token_lengths.size(); ++i) {
    const std::size_t len = token_lengths[i];
    if (!current.empty() && current_tokens + len > budget) {
      groups.push_back(std::move(current));
      current.clear();
      current_tokens = 0;
    }
    current.push_back(i);
    current_tokens += len;
  }
  if (!current.empty()) groups.push_back(std::move(current));
  return groups;
}

std::vector<Batch> make_batches(std::vector<ProcessedUtterance> utterances,
                                std::size_t token_budget) {
  std::vector<std::size_t> lengths(utterances.size());
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    lengths[i] = utterances[i].tokens.size();
  }
  std::vector<Batch> batches;
  for (const auto& group : plan_batches(lengths, token_budget)) {
    Batch b;
    b.items.reserve(group.size());
    for (std::size_t i : group) b.items.push_back(std::move(utterances[i]));
    std::stable_sort(b.items.begin(), b.items.end(),
                     [](const ProcessedUtterance& a, const ProcessedUtterance& c) {
                       return a.features.rows() > c.features.rows();
                     });
    for (const auto& item : b.items) {
      b.feature_pad_len = std::max(b.feature_pad_len, item.features.rows());
      b.token_pad_len = std::max(b.token_pad_len, item.tokens.size());
      b.total_tokens += item.tokens.size();
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

std::vector<std::size_t> shuffled_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i - 1));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

Abb1Writer::Abb1Writer(std::ostream& out) : out_(out) {
  binio::put_magic(out_, "ABB1");
  count_pos_ = out_.tellp();
  binio::put_u32(out_, 0);
}

void Abb1Writer::write(const Batch& batch) {
  binio::put_u32(out_, checked_u32(batch.items.size(), "item count"));
  for (const ProcessedUtterance& item : batch.items) {
    binio::put_u32(out_, checked_u32(item.features.rows(), "frame count"));
    binio::put_u32(out_, checked_u32(item.features.cols(), "feature dimension"));
    for (double v : item.features.values()) {
      binio::put_f32(out_, static_cast<float>(v));
    }
    binio::put_u32(out_, checked_u32(item.tokens.size(), "token count"));
    for (int32_t t : item.tokens) binio::put_u32(out_, static_cast<uint32_t>(t));
  }
  ++count_;
}

void Abb1Writer::finish() {
  const std::streampos end = out_.tellp();
  out_.seekp(count_pos_);
  binio::put_u32(out_, checked_u32(count_, "batch count"));
  out_.seekp(end);
  out_.flush();
  if (!out_) throw_input("failed writing ABB1 stream");
}

std::vector<Batch> read_abb1(std::istream& in) {
  binio::expect_magic(in, "ABB1");
  const uint32_t n_batches = binio::get_u32(in, "ABB1 batch count");
  std::vector<Batch> out;
  out.reserve(n_batches);
  for (uint32_t b = 0; b < n_batches; ++b) {
    Batch batch;
    const uint32_t n_items = binio::get_u32(in, "ABB1 item count");
    for (uint32_t i = 0; i < n_items; ++i) {
      ProcessedUtterance item;
      const uint32_t rows = binio::get_u32(in, "ABB1 frame count");
      const uint32_t cols = binio::get_u32(in, "ABB1 dimension");
      std::vector<double> data(static_cast<std::size_t>(rows) * cols);
      for (double& v : data) v = binio::get_f32(in, "ABB1 values");
      item.features = FeatureMatrix(rows, cols, std::move(data));
      const uint32_t n_tok = binio::get_u32(in, "ABB1 token count");
      item.tokens.resize(n_tok);
      for (int32_t& t : item.tokens) {
        t = static_cast<int32_t>(binio::get_u32(in, "ABB1 tokens"));
      }
      batch.feature_pad_len = std::max<std::size_t>(batch.feature_pad_len, rows);
      batch.token_pad_len = std::max<std::size_t>(batch.token_pad_len, n_tok);
      batch.total_tokens += n_tok;
      batch.items.push_back(std::move(item));
    }
    out.push_back(std::move(batch));
  }
  return out;
}

std::vector<Batch> read_abb1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_input("cannot open batch file '" + path + "'");
  return read_abb1(in);
}

}  // namespace augpipe
