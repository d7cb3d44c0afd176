/* Copyright 2026 The IRRM Authors. All Rights Reserved.

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

#include <set>
#include <thread>

#include "doctest.h"
#include "irrm/config.hpp"
#include "irrm/errors.hpp"
#include "irrm/parallel.hpp"
#include "irrm/random.hpp"
#include "irrm/types.hpp"
#include "test_util.hpp"

namespace irrm {
namespace {

TEST_CASE("inventory has 40 unique symbols with silence at slot 0") {
  const auto& inv = PhonemeInventory::cmu();
  CHECK(inv.size() == 40);
  std::set<std::string> unique(inv.symbols().begin(), inv.symbols().end());
  CHECK(unique.size() == 40);
  CHECK(inv.symbol(0) == "SIL");
  CHECK(inv.index("SIL") == PhonemeInventory::kBlank);
  for (int i = 0; i < inv.size(); ++i) CHECK(inv.index(inv.symbol(i)) == i);
  CHECK_THROWS_AS(inv.index("XX"), VocabularyError);
  CHECK_THROWS_AS(inv.symbol(40), VocabularyError);
  CHECK_FALSE(inv.find("xx").has_value());
}

TEST_CASE("frame sequence validation") {
  FrameSequence seq;
  seq.frames = Matrix::Identity(2, 2);
  CHECK_NOTHROW(seq.validate());
  seq.frame_duration = 0.0;
  CHECK_THROWS_AS(seq.validate(), ValidationError);
  seq.frame_duration = 0.02;
  seq.frames(0, 1) = std::nan("");
  CHECK_THROWS_AS(seq.validate(), ValidationError);
  seq.frames = Matrix(0, 3);
  CHECK_THROWS_AS(seq.validate(), ValidationError);
}

TEST_CASE("codebook shapes, labels and random init") {
  Codebook irrm_cb = Codebook::random(1, 40, 16, 3);
  CHECK(irrm_cb.groups() == 1);
  CHECK(irrm_cb.entries() == 40);
  CHECK(irrm_cb.dim() == 16);

  Codebook baseline = Codebook::random(2, 320, 16, 3);
  CHECK(baseline.groups() == 2);
  CHECK(baseline.entries() == 320);
  CHECK(baseline.group_dim() == 8);
  CHECK(baseline.dim() == 16);
  CHECK_NOTHROW(baseline.validate());
  CHECK_THROWS_AS(Codebook::random(3, 4, 16, 0), ValidationError);

  CHECK(Codebook::random(1, 40, 16, 9) == Codebook::random(1, 40, 16, 9));
  CHECK_FALSE(Codebook::random(1, 40, 16, 9) == Codebook::random(1, 40, 16, 10));

  irrm_cb.set_labels(PhonemeInventory::cmu().symbols());
  CHECK_NOTHROW(irrm_cb.validate());
  auto dup = PhonemeInventory::cmu().symbols();
  dup[2] = dup[1];
  CHECK_THROWS(irrm_cb.set_labels(dup));
  CHECK_THROWS(baseline.set_labels(PhonemeInventory::cmu().symbols()));
}

TEST_CASE("quantized vectors concatenate the selected entries") {
  Codebook cb = Codebook::random(2, 5, 4, 1);
  QuantizedSequence q = make_quantized(cb, {0, 4, 3, 1}, false);
  REQUIRE(q.length() == 2);
  CHECK(q.index(0, 1) == 4);
  CHECK(q.vectors.row(0).head(2) == cb.group(0).row(0));
  CHECK(q.vectors.row(0).tail(2) == cb.group(1).row(4));
  CHECK(q.vectors.row(1).head(2) == cb.group(0).row(3));
  CHECK_NOTHROW(q.validate(cb));
  CHECK(q.key(0, 5) != q.key(1, 5));
  CHECK_THROWS_AS(make_quantized(cb, {0, 5}, false), ValidationError);
  CHECK_THROWS_AS(make_quantized(cb, {0}, false), ValidationError);
  q.vectors(1, 0) += 1.0;
  CHECK_THROWS_AS(q.validate(cb), ValidationError);
}

TEST_CASE("alignment collapse keeps repeats and boundaries skip frame 0") {
  PhonemeAlignment a{{{0, 3, 0}, {3, 7, 1}, {7, 9, 1}}};
  CHECK_NOTHROW(a.validate());
  CHECK(a.frames() == 9);
  CHECK(a.collapsed() == std::vector<int>{0, 1, 1});
  CHECK(a.boundaries() == std::vector<int>{3, 7});

  PhonemeAlignment gap{{{0, 3, 1}, {4, 7, 1}}};
  CHECK_THROWS_AS(gap.validate(), ValidationError);
  PhonemeAlignment empty_seg{{{0, 0, 1}}};
  CHECK_THROWS_AS(empty_seg.validate(), ValidationError);
  PhonemeAlignment late_start{{{1, 3, 1}}};
  CHECK_THROWS_AS(late_start.validate(), ValidationError);
}

TEST_CASE("config validation rejects non-positive weights") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    TrainConfig x;
    mutate(x);
    return x;
  };
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.tau_start = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.beta = -1; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.kappa = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.win = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.k_neighbors = 0; }).validate(),
                  ValidationError);
  CHECK_THROWS_AS(bad([](TrainConfig& x) { x.mask_prob = 1.0; }).validate(),
                  ValidationError);
}

TEST_CASE("config text round-trips and rejects unknown keys") {
  TrainConfig c;
  c.scheme = QuantizerScheme::kGumbel;
  c.tau_end = 0.1;
  c.k_neighbors = 5;
  c.cluster_correction = false;
  c.map_flat_start = false;
  c.seed = 123456789012345ull;
  c.learning_rate = 1.0 / 3.0;
  const std::string text = format_config(c);
  const TrainConfig back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(back.learning_rate == c.learning_rate);
  CHECK(back.scheme == QuantizerScheme::kGumbel);
  CHECK(back.seed == c.seed);

  CHECK(parse_config("# comment\n\nwin = 4\n").win == 4);
  CHECK_THROWS_AS(parse_config("nonsense=1"), FormatError);
  CHECK_THROWS_AS(parse_config("win=abc"), FormatError);
  CHECK_THROWS_AS(parse_config("win"), FormatError);
  CHECK_THROWS_AS(parse_config("win=0"), ValidationError);
}

TEST_CASE("keyed streams replay identically and differ across keys") {
  Rng a = keyed_stream(5, StreamTag::kMask, {1, 2});
  Rng b = keyed_stream(5, StreamTag::kMask, {1, 2});
  Rng c = keyed_stream(5, StreamTag::kMask, {2, 1});
  Rng d = keyed_stream(5, StreamTag::kNegatives, {1, 2});
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
  for (int i = 0; i < 100; ++i) {
    const double u = open_uniform(a);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("parallel_for visits each index once for any thread count") {
  for (int threads : {1, 2, 3, 8}) {
    std::vector<int> hits(37, 0);
    parallel_for(37, threads, [&](int i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](int i) {
                                 if (i == 7) throw DomainError("boom");
                               }),
                  DomainError);
  CHECK(resolve_threads(4) == 4);
}

}  // namespace
}  // namespace irrm
