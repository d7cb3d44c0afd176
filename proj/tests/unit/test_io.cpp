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

#include <filesystem>

#include "doctest.h"
#include "irrm/errors.hpp"
#include "irrm/io.hpp"
#include "test_util.hpp"

namespace irrm {
namespace {

namespace fs = std::filesystem;
using testing::random_matrix;
using testing::temp_dir;
using testing::test_rng;

TEST_CASE("2x2 csv parses to the identity") {
  FrameSequence seq = parse_frame_csv("d=2\n1,0\n0,1\n");
  CHECK(seq.frames == Matrix::Identity(2, 2));
  CHECK(seq.frame_duration == 0.02);

  FrameSequence headerless = parse_frame_csv("1,0\n0,1\n");
  CHECK(headerless.frames == Matrix::Identity(2, 2));

  FrameSequence with_rate = parse_frame_csv("# d=2 frame_duration=0.01\n1,0\n");
  CHECK(with_rate.frame_duration == 0.01);
}

TEST_CASE("csv row of wrong arity is a format error") {
  CHECK_THROWS_AS(parse_frame_csv("d=2\n1,0\n0\n"), FormatError);
  CHECK_THROWS_AS(parse_frame_csv("1,0\n0,1,2\n"), FormatError);
  CHECK_THROWS_AS(parse_frame_csv("d=3\n1,0\n"), FormatError);
  CHECK_THROWS_AS(parse_frame_csv("1,x\n"), FormatError);
  CHECK_THROWS_AS(parse_frame_csv(""), FormatError);
}

TEST_CASE("random 5x3 frames round-trip bit-exactly in both formats") {
  const auto dir = temp_dir("io_frames");
  Rng rng = test_rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    FrameSequence seq;
    seq.frames = random_matrix(5, 3, rng, 10.0);
    seq.frame_duration = 0.0125;
    for (auto format : {FeatureFormat::kBinary, FeatureFormat::kCsv}) {
      const std::string path =
          (dir / (format == FeatureFormat::kCsv ? "f.csv" : "f.bin")).string();
      save_frame_sequence(seq, path, format);
      FrameSequence back = load_frame_sequence(path);
      CHECK(back.frames == seq.frames);
      CHECK(back.frame_duration == seq.frame_duration);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("truncated binary features are rejected") {
  const auto dir = temp_dir("io_trunc");
  FrameSequence seq;
  seq.frames = Matrix::Ones(4, 2);
  const std::string path = (dir / "f.bin").string();
  save_frame_sequence(seq, path, FeatureFormat::kBinary);
  fs::resize_file(path, fs::file_size(path) - 3);
  CHECK_THROWS_AS(load_frame_sequence(path), FormatError);
  fs::remove_all(dir);
}

TEST_CASE("alignment parsing") {
  const auto& inv = PhonemeInventory::cmu();
  PhonemeAlignment a = parse_alignment("0 3 SIL\n3 7 AA\n");
  REQUIRE(a.segments.size() == 2);
  CHECK(a.collapsed() ==
        std::vector<int>{inv.index("SIL"), inv.index("AA")});

  CHECK_THROWS_AS(parse_alignment("0 3 AA\n4 7 AA\n"), ValidationError);

  PhonemeAlignment repeats = parse_alignment("0 3 AA\n3 7 AA\n");
  CHECK(repeats.collapsed() ==
        std::vector<int>{inv.index("AA"), inv.index("AA")});

  CHECK_THROWS_AS(parse_alignment("0 3 QQ\n"), VocabularyError);
  CHECK_THROWS_AS(parse_alignment("0 3\n"), FormatError);
}

TEST_CASE("alignment and codebook files round-trip") {
  const auto dir = temp_dir("io_rt");
  PhonemeAlignment a = parse_alignment("0 2 SIL\n2 5 T\n5 6 D\n6 8 SIL\n");
  save_alignment(a, (dir / "a.ali").string());
  CHECK(load_alignment((dir / "a.ali").string()).segments == a.segments);

  Codebook labeled = Codebook::random(1, 40, 6, 4);
  labeled.set_labels(PhonemeInventory::cmu().symbols());
  Codebook grouped = Codebook::random(2, 320, 16, 4);
  for (const Codebook& cb : {labeled, grouped}) {
    save_codebook(cb, (dir / "c.bin").string());
    CHECK(load_codebook((dir / "c.bin").string()) == cb);
  }
  write_text_file((dir / "bad.bin").string(), "not a codebook");
  CHECK_THROWS_AS(load_codebook((dir / "bad.bin").string()), FormatError);
  fs::remove_all(dir);
}

TEST_CASE("boundary files round-trip and validate") {
  const auto dir = temp_dir("io_bnd");
  BoundaryFile file{{3, 9, 14}, 20, 0.01};
  save_boundaries(file, (dir / "b.txt").string());
  BoundaryFile back = load_boundaries((dir / "b.txt").string());
  CHECK(back.boundaries == file.boundaries);
  CHECK(back.frames == 20);
  CHECK(back.frame_duration == 0.01);
  CHECK_THROWS_AS(parse_boundaries("# frames=10 frame_duration=0.02\n5\n3\n"),
                  ValidationError);
  CHECK_THROWS_AS(parse_boundaries("# frames=10 frame_duration=0.02\n10\n"),
                  ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("phoneme line files") {
  const auto dir = temp_dir("io_lines");
  write_text_file((dir / "r.txt").string(), "AA B  T\n\nSIL D\n");
  auto lines = load_phoneme_lines((dir / "r.txt").string());
  REQUIRE(lines.size() >= 2);
  CHECK(lines.front() == std::vector<std::string>{"AA", "B", "T"});
  CHECK(lines.back() == std::vector<std::string>{"SIL", "D"});
  fs::remove_all(dir);
}

}  // namespace
}  // namespace irrm
