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

#ifndef IRRM_CORPUS_HPP_
#define IRRM_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

struct Utterance {
  FrameSequence features;
  PhonemeAlignment alignment;
};

using Corpus = std::vector<Utterance>;

/// Synthetic accent-shift corpus. Each utterance is silence, a random
/// phoneme string without immediate repeats, then silence. A frame of
/// phoneme p is anchors[p] + accent_offsets[p] + noise_scale * N(0, I).
struct SyntheticCorpusSpec {
  Matrix anchors;         // 40 x input_dim
  Matrix accent_offsets;  // 40 x input_dim, zero for the source domain
  int min_duration = 4;
  int max_duration = 10;
  int min_phonemes = 6;
  int max_phonemes = 12;
  // Non-silence inventory slots to draw phonemes from; empty means all.
  std::vector<int> phoneme_pool;
  double noise_scale = 0.1;
  int utterances = 50;
  double frame_duration = 0.02;
  std::uint64_t seed = 0;

  // Gaussian anchors (scale per coordinate), zero offsets.
  static SyntheticCorpusSpec standard(int input_dim, std::uint64_t anchor_seed,
                                      double anchor_scale = 1.0);
  int input_dim() const { return static_cast<int>(anchors.cols()); }
  void shift_phoneme(int phoneme, const Vector& offset);
  void validate() const;
};

Matrix make_anchors(int input_dim, std::uint64_t seed, double scale);

// Utterance i draws from a stream keyed by (seed, i), so the corpus does not
// depend on the thread count.
Corpus generate_corpus(const SyntheticCorpusSpec& spec, int threads = 1);

// Directory layout: corpus.txt lists utterance ids; <id>.bin holds binary
// features and <id>.ali the alignment.
void save_corpus(const Corpus& corpus, const std::string& directory);
Corpus load_corpus(const std::string& directory);

}  // namespace irrm

#endif  // IRRM_CORPUS_HPP_
