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

#ifndef IRRM_RANDOM_HPP_
#define IRRM_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace irrm {

using Rng = std::mt19937_64;

// Purpose tags for keyed streams, so that no two consumers share draws.
enum class StreamTag : std::uint64_t {
  kCodebookInit = 1,
  kModelInit = 2,
  kAnchors = 3,
  kCorpus = 4,
  kGumbel = 5,
  kMask = 6,
  kNegatives = 7,
  kShuffle = 8,
};

// A generator keyed by (seed, tag, counters...). Equal keys replay the same
// draws regardless of which thread or in which order they are created.
inline Rng keyed_stream(std::uint64_t seed, StreamTag tag,
                        std::initializer_list<std::uint64_t> counters = {}) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  push(static_cast<std::uint64_t>(tag));
  for (auto c : counters) push(c);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

// Uniform draw on the open interval (0, 1).
inline double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = dist(rng);
  while (u <= 0.0) u = dist(rng);
  return u;
}

}  // namespace irrm

#endif  // IRRM_RANDOM_HPP_
