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

// Runs the augpipe executable as a subprocess.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.h"
#include "oracles.h"
#include "test_util.h"

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run_cli(const testutil::TempDir& dir, const std::string& args,
               const std::string& env = "") {
  const std::string out = dir.file("stdout.txt"), err = dir.file("stderr.txt");
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" AUGPIPE_CLI_PATH "' " + args +
                          " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testutil::read_file(out);
  r.err = testutil::read_file(err);
  return r;
}

struct Fmb {
  std::size_t T = 0, D = 0;
  std::vector<float> v;
};

Fmb read_fmb(const std::string& path) {
  const std::string bytes = testutil::read_file(path);
  Fmb m;
  if (bytes.size() < 12 || bytes.compare(0, 4, "FMB1") != 0) return m;
  auto u32 = [&](std::size_t off) {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<uint8_t>(bytes[off + i])) << (8 * i);
    return v;
  };
  m.T = u32(4);
  m.D = u32(8);
  m.v.resize(m.T * m.D);
  for (std::size_t i = 0; i < m.v.size(); ++i) {
    const uint32_t bits = u32(12 + 4 * i);
    std::memcpy(&m.v[i], &bits, 4);
  }
  return m;
}

void write_features(const testutil::TempDir& dir, const std::string& name, std::size_t T,
                    std::size_t D, uint64_t seed) {
  testutil::Gen g(seed);
  std::vector<float> v(T * D);
  for (auto& x : v) x = static_cast<float>(g.real(-4, 4));
  testutil::write_fmb1_raw(dir.file(name), T, D, v);
}

// Rebuilds an augment output from the input and the printed draw log alone.
Fmb replay(const Fmb& in, const std::string& log) {
  std::istringstream ls(log);
  std::string line;
  std::optional<std::size_t> window;
  bool stretch = false;
  std::vector<double> factors;
  std::vector<oracle::Rect> rects;
  double value = 0;
  while (std::getline(ls, line)) {
    std::istringstream f(line);
    std::string key;
    f >> key;
    if (key == "stretch") {
      std::string w;
      f >> w;
      if (w == "off") continue;
      stretch = true;
      f >> w;
      if (w != "inf") window = std::stoul(w);
    } else if (key == "s") {
      std::size_t i;
      double s;
      f >> i >> s;
      factors.push_back(s);
    } else if (key == "mask") {
      std::string tok;
      while (f >> tok) {
        if (tok == "value") f >> value;
      }
    } else if (key == "rect") {
      std::size_t round, drawn, start, width;
      std::string axis, k1, k2, k3;
      f >> round >> axis >> k1 >> drawn >> k2 >> start >> k3 >> width;
      rects.push_back({axis == "freq", drawn, start});
    }
  }
  std::vector<std::size_t> idx;
  if (stretch) {
    idx = oracle::stretch(in.T, window, factors);
  } else {
    for (std::size_t t = 0; t < in.T; ++t) idx.push_back(t);
  }
  Fmb out;
  out.T = idx.size();
  out.D = in.D;
  const auto grid = oracle::mask_union(out.T, out.D, rects);
  for (std::size_t t = 0; t < out.T; ++t) {
    for (std::size_t d = 0; d < out.D; ++d) {
      out.v.push_back(grid[t][d] ? static_cast<float>(value) : in.v[idx[t] * in.D + d]);
    }
  }
  return out;
}

TEST(Cli, UsageErrorsExitTwo) {
  testutil::TempDir dir;
  EXPECT_EQ(run_cli(dir, "").code, 2);
  EXPECT_EQ(run_cli(dir, "frobnicate").code, 2);
  EXPECT_EQ(run_cli(dir, "render --in x.fmb").code, 2);
  EXPECT_EQ(run_cli(dir, "--help").code, 0);
}

TEST(Cli, AugmentIdentity) {
  testutil::TempDir dir;
  write_features(dir, "in.fmb", 50, 40, 1);
  const Result r = run_cli(dir, "augment --in " + dir.file("in.fmb") + " --out " +
                                    dir.file("out.fmb") + " --mask-T 0 --no-stretch");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(testutil::read_file(dir.file("in.fmb")), testutil::read_file(dir.file("out.fmb")));
}

TEST(Cli, AugmentDeterministicUnderSeed) {
  testutil::TempDir dir;
  write_features(dir, "in.fmb", 120, 40, 2);
  const std::string base = "--seed 7 augment --in " + dir.file("in.fmb") + " --stretch-w inf ";
  ASSERT_EQ(run_cli(dir, base + "--out " + dir.file("a.fmb")).code, 0);
  ASSERT_EQ(run_cli(dir, base + "--out " + dir.file("b.fmb")).code, 0);
  EXPECT_EQ(testutil::read_file(dir.file("a.fmb")), testutil::read_file(dir.file("b.fmb")));
  ASSERT_EQ(run_cli(dir, "--seed 8 augment --in " + dir.file("in.fmb") + " --out " +
                             dir.file("c.fmb"))
                .code,
            0);
  EXPECT_NE(testutil::read_file(dir.file("a.fmb")), testutil::read_file(dir.file("c.fmb")));
}

TEST(Cli, SeedPrecedence) {
  testutil::TempDir dir;
  write_features(dir, "in.fmb", 80, 10, 3);
  const std::string aug = "augment --in " + dir.file("in.fmb") + " --out " + dir.file("o.fmb");
  const Result env = run_cli(dir, aug, "AUGPIPE_SEED=5");
  const Result flag = run_cli(dir, "--seed 9 " + aug, "AUGPIPE_SEED=5");
  ASSERT_EQ(env.code, 0);
  ASSERT_EQ(flag.code, 0);
  EXPECT_NE(env.out.find("seed 5\n"), std::string::npos);
  EXPECT_NE(flag.out.find("seed 9\n"), std::string::npos);
}

TEST(Cli, DrawLogReplaysAndRespectsBounds) {
  testutil::TempDir dir;
  write_features(dir, "in.fmb", 90, 40, 4);
  const Fmb in = read_fmb(dir.file("in.fmb"));
  for (int seed = 0; seed < 100; ++seed) {
    const std::string w = seed % 2 ? "inf" : "25";
    const Result r = run_cli(
        dir, "--seed " + std::to_string(seed) + " augment --in " + dir.file("in.fmb") +
                 " --out " + dir.file("o.fmb") + " --stretch-w " + w +
                 " --mask-T 2 --mask-f-max 13 --mask-t-max 20 --draw-log " +
                 dir.file("log.txt"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, testutil::read_file(dir.file("log.txt")));
    std::istringstream ls(r.out);
    std::string line;
    int rects = 0;
    while (std::getline(ls, line)) {
      if (line.rfind("rect", 0) != 0) continue;
      ++rects;
      std::istringstream f(line);
      std::string key, axis, k;
      std::size_t round, drawn, start, width;
      f >> key >> round >> axis >> k >> drawn >> k >> start >> k >> width;
      ASSERT_LE(drawn, axis == "freq" ? 13u : 20u) << line;
      ASSERT_LE(width, drawn);
    }
    EXPECT_EQ(rects, 4);
    const Fmb out = read_fmb(dir.file("o.fmb"));
    const Fmb again = replay(in, r.out);
    ASSERT_EQ(again.T, out.T) << "seed " << seed;
    ASSERT_EQ(again.v, out.v) << "seed " << seed;
  }
}

TEST(Cli, AugmentPolicyErrors) {
  testutil::TempDir dir;
  write_features(dir, "in.fmb", 30, 8, 5);
  const std::string base = "augment --in " + dir.file("in.fmb") + " --out " + dir.file("o.fmb");
  EXPECT_EQ(run_cli(dir, base + " --stretch-w 0").code, 2);
  EXPECT_EQ(run_cli(dir, base + " --stretch-w abc").code, 2);
  EXPECT_EQ(run_cli(dir, base + " --stretch-low 2 --stretch-high 1").code, 2);
  EXPECT_EQ(run_cli(dir, base + " --mask-T 1").code, 2);
  EXPECT_EQ(run_cli(dir, base + " --mask-T -1").code, 2);
  EXPECT_FALSE(fs::exists(dir.file("o.fmb")));
  EXPECT_EQ(run_cli(dir, "augment --in " + dir.file("nope.fmb") + " --out " +
                             dir.file("o.fmb"))
                .code,
            1);
}

TEST(Cli, ExtractOneUtterance) {
  testutil::TempDir dir;
  const auto samples = testutil::babble(1.234, 8000, 6);
  testutil::write_pcm_wav(dir.file("a.wav"), samples, 8000);
  testutil::write_file(dir.file("m.jsonl"),
                       "{\"id\": \"a\", \"conversation_id\": \"c\", \"audio\": \"a.wav\", "
                       "\"tokens\": [4, 5]}\n");
  const Result r = run_cli(dir, "extract --manifest " + dir.file("m.jsonl") + " --out " +
                                    dir.file("feats"));
  ASSERT_EQ(r.code, 0) << r.err;
  const Fmb f = read_fmb(dir.file("feats/a.fmb"));
  EXPECT_EQ(f.T, 1 + (samples.size() - 200) / 80);
  EXPECT_EQ(f.D, 40u);
  EXPECT_TRUE(fs::exists(dir.file("feats/stats.json")));
  const auto stats = nlohmann::json::parse(testutil::read_file(dir.file("feats/stats.json")));
  EXPECT_EQ(stats["c"]["frame_count"], f.T);

  const std::string first = testutil::read_file(dir.file("feats/a.fmb"));
  const std::string first_stats = testutil::read_file(dir.file("feats/stats.json"));
  ASSERT_EQ(run_cli(dir, "extract --manifest " + dir.file("m.jsonl") + " --out " +
                             dir.file("feats"))
                .code,
            0);
  EXPECT_EQ(testutil::read_file(dir.file("feats/a.fmb")), first);
  EXPECT_EQ(testutil::read_file(dir.file("feats/stats.json")), first_stats);

  // The emitted manifest runs through the pipeline.
  ASSERT_EQ(run_cli(dir, "run --manifest " + dir.file("feats/manifest.jsonl") + " --out " +
                             dir.file("o.abb"))
                .code,
            0);
}

TEST(Cli, ExtractMissingAudioNamesUtterance) {
  testutil::TempDir dir;
  testutil::write_pcm_wav(dir.file("a.wav"), testutil::babble(0.5, 8000, 1), 8000);
  testutil::write_file(dir.file("m.jsonl"),
                       "{\"id\": \"good\", \"conversation_id\": \"c\", \"audio\": \"a.wav\", "
                       "\"tokens\": [1]}\n"
                       "{\"id\": \"lost-one\", \"conversation_id\": \"c\", \"audio\": "
                       "\"missing.wav\", \"tokens\": [1]}\n");
  const Result r = run_cli(dir, "extract --manifest " + dir.file("m.jsonl") + " --out " +
                                    dir.file("feats"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("lost-one"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir.file("feats/good.fmb")));
}

nlohmann::json read_jsonl(const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  std::istringstream in(testutil::read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) arr.push_back(nlohmann::json::parse(line));
  }
  return arr;
}

TEST(Cli, SubseqStaticExpandsFourfold) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 6;
  const auto corpus = testutil::make_corpus(dir, spec);
  const std::string cmd = "--seed 3 subseq --mode static --manifest " + corpus.manifest +
                          " --out " + dir.file("expanded.jsonl");
  const Result r = run_cli(dir, cmd);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto out = read_jsonl(dir.file("expanded.jsonl"));
  ASSERT_EQ(out.size(), 24u);
  const std::string first = testutil::read_file(dir.file("expanded.jsonl"));
  ASSERT_EQ(run_cli(dir, cmd).code, 0);
  EXPECT_EQ(testutil::read_file(dir.file("expanded.jsonl")), first);

  // Every sub-entry is a valid cut of its source.
  std::map<std::string, const testutil::SynthUtt*> by_id;
  for (const auto& u : corpus.utts) by_id[u.id] = &u;
  for (const auto& e : out) {
    if (!e.contains("source")) continue;
    const auto& su = *by_id.at(e["source"].get<std::string>());
    const std::size_t a = e["frames"][0], b = e["frames"][1];
    std::vector<oracle::Word> words;
    for (auto [s, t] : su.words) words.push_back({s, t});
    const std::string id = e["id"];
    const oracle::Variant v = id.ends_with("#prefix")   ? oracle::Variant::kPrefix
                              : id.ends_with("#suffix") ? oracle::Variant::kSuffix
                                                        : oracle::Variant::kInfix;
    bool found = false;
    for (const auto& [ca, cb, first_w, last_w] : oracle::subseq_candidates(su.frames, words, v)) {
      if (ca != a || cb != b) continue;
      std::vector<int32_t> toks;
      for (std::size_t k = first_w; k <= last_w; ++k) {
        toks.insert(toks.end(), su.word_tokens[k].begin(), su.word_tokens[k].end());
      }
      found = toks == e["tokens"].get<std::vector<int32_t>>();
    }
    EXPECT_TRUE(found) << e.dump();
    EXPECT_EQ(e["features"], su.id + ".fmb");
  }

  // The expanded manifest is itself runnable.
  ASSERT_EQ(run_cli(dir, "run --manifest " + dir.file("expanded.jsonl") + " --out " +
                             dir.file("o.abb"))
                .code,
            0);
}

TEST(Cli, SubseqSingleWordCorpusUnchanged) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 4;
  spec.min_words = spec.max_words = 1;
  const auto corpus = testutil::make_corpus(dir, spec);
  ASSERT_EQ(run_cli(dir, "subseq --manifest " + corpus.manifest + " --out " +
                             dir.file("out.jsonl"))
                .code,
            0);
  const auto in = read_jsonl(corpus.manifest);
  const auto out = read_jsonl(dir.file("out.jsonl"));
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(out[i]["id"], in[i]["id"]);
    EXPECT_EQ(out[i]["tokens"], in[i]["tokens"]);
  }
}

TEST(Cli, SubseqDynamicReport) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 5;
  const auto corpus = testutil::make_corpus(dir, spec);
  const Result r = run_cli(dir, "--epoch 2 subseq --mode dynamic --alpha 1 --manifest " +
                                    corpus.manifest + " --out " + dir.file("r.jsonl"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rep = read_jsonl(dir.file("r.jsonl"));
  ASSERT_EQ(rep.size(), 5u);
  for (const auto& e : rep) {
    EXPECT_EQ(e["epoch"], 2);
    EXPECT_FALSE(e["variant"].is_null());
  }
}

TEST(Cli, SubseqMissingAlignmentListsIds) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 2;
  spec.with_alignment = false;
  const auto corpus = testutil::make_corpus(dir, spec);
  const Result r =
      run_cli(dir, "subseq --manifest " + corpus.manifest + " --out " + dir.file("o.jsonl"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("utt0"), std::string::npos);
  EXPECT_NE(r.err.find("utt1"), std::string::npos);
}

TEST(Cli, RunWorkersByteIdentical) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 20;
  const auto corpus = testutil::make_corpus(dir, spec);
  testutil::write_file(dir.file("c.ini"), "[mask]\nf_max = 13\nt_max = 20\n");
  const std::string base = "--config " + dir.file("c.ini") +
                           " --preset lstm-300h --seed 5 run --manifest " + corpus.manifest;
  ASSERT_EQ(run_cli(dir, "--workers 1 " + base + " --out " + dir.file("a.abb")).code, 0);
  ASSERT_EQ(run_cli(dir, "--workers 8 " + base + " --out " + dir.file("b.abb")).code, 0);
  EXPECT_EQ(testutil::read_file(dir.file("a.abb")), testutil::read_file(dir.file("b.abb")));
  EXPECT_EQ(run_cli(dir, "--preset lstm-300h run --manifest " + corpus.manifest + " --out " +
                             dir.file("c.abb"))
                .code,
            2);
}

TEST(Cli, BenchWritesReport) {
  testutil::TempDir dir;
  testutil::CorpusSpec spec;
  spec.utterances = 3;
  const auto corpus = testutil::make_corpus(dir, spec);
  const Result r = run_cli(dir, "bench --duration 0.1 --manifest " + corpus.manifest +
                                    " --out " + dir.file("bench.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(testutil::read_file(dir.file("bench.json")));
  EXPECT_EQ(j["schema"], "augpipe-bench/1");
}

TEST(Cli, RenderDimensionsAndBands) {
  testutil::TempDir dir;
  const std::size_t T = 30, D = 12;
  std::vector<float> v(T * D);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) v[t * D + d] = (d >= 3 && d < 5) ? 0.0f : 1.0f + t + d;
  }
  testutil::write_fmb1_raw(dir.file("m.fmb"), T, D, v);
  ASSERT_EQ(run_cli(dir, "render --in " + dir.file("m.fmb") + " --out " + dir.file("m.pgm")).code,
            0);
  const std::string pgm = testutil::read_file(dir.file("m.pgm"));
  const std::string header = "P5\n30 12\n255\n";
  ASSERT_EQ(pgm.substr(0, header.size()), header);
  ASSERT_EQ(pgm.size(), header.size() + T * D);
  for (std::size_t y = 0; y < D; ++y) {
    const std::size_t channel = D - 1 - y;
    for (std::size_t x = 0; x < T; ++x) {
      const auto px = static_cast<uint8_t>(pgm[header.size() + y * T + x]);
      if (channel == 3 || channel == 4) {
        ASSERT_EQ(px, 0) << y << "," << x;
      } else {
        ASSERT_GT(px, 0);
      }
    }
  }

  testutil::write_fmb1_raw(dir.file("c.fmb"), 5, 4, std::vector<float>(20, 2.5f));
  ASSERT_EQ(run_cli(dir, "render --in " + dir.file("c.fmb") + " --out " + dir.file("c.pgm")).code,
            0);
  const std::string c = testutil::read_file(dir.file("c.pgm"));
  const std::string body = c.substr(std::string("P5\n5 4\n255\n").size());
  EXPECT_EQ(body, std::string(20, '\0'));

  testutil::write_fmb1_raw(dir.file("e.fmb"), 0, 4, {});
  EXPECT_EQ(run_cli(dir, "render --in " + dir.file("e.fmb") + " --out " + dir.file("e.pgm")).code,
            1);
}

}  // namespace
