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

#ifndef IRRM_CTC_HPP_
#define IRRM_CTC_HPP_

#include <span>
#include <utility>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

/// T x V matrix; row t is P(v | z_t).
struct PosteriorSequence {
  Matrix probs;
  void validate() const;
};

// P(v | z) = exp(-||z - e_v||) / sum_k exp(-||z - e_k||), evaluated with the
// largest score subtracted first.
Vector softmin_posterior(const Vector& z, const Matrix& entries);
Vector softmin_log_posterior(const Vector& z, const Matrix& entries);
PosteriorSequence softmin_posteriors(const Matrix& frames,
                                     const Matrix& entries);
Matrix softmin_log_posteriors(const Matrix& frames, const Matrix& entries);

// Product over frames of the posterior of path[t].
double path_likelihood(const PosteriorSequence& posteriors,
                       std::span<const int> path);

// Minimum frame count for a blank-free label sequence: one frame per label
// plus a separating blank between equal neighbours.
int ctc_min_frames(std::span<const int> labels);

// log P(labels | Z) summed over all length-T paths that collapse to
// labels (merge repeats, then drop blanks). labels must not contain the
// blank; infeasible lengths raise DomainError.
double ctc_log_likelihood(const Matrix& log_probs, std::span<const int> labels,
                          int blank = PhonemeInventory::kBlank);
double ctc_likelihood(const PosteriorSequence& posteriors,
                      std::span<const int> labels,
                      int blank = PhonemeInventory::kBlank);

struct CtcForwardBackward {
  double log_likelihood = 0.0;
  // T x V; row t is the posterior occupancy of each symbol at frame t.
  // Rows sum to 1. d logL / d log P(k | z_t) equals occupancy(t, k).
  Matrix occupancy;
};
CtcForwardBackward ctc_forward_backward(const Matrix& log_probs,
                                        std::span<const int> labels,
                                        int blank = PhonemeInventory::kBlank);

struct CtcCodebookGradient {
  double log_likelihood = 0.0;
  Matrix grad;  // d logL / d entries, V x d
};
// Gradient of the softmin-posterior CTC log-likelihood with respect to the
// codebook entries, with frames held fixed.
CtcCodebookGradient ctc_codebook_gradient(const Matrix& frames,
                                          const Matrix& entries,
                                          std::span<const int> labels,
                                          int blank = PhonemeInventory::kBlank);

// CTC target for an alignment: the collapsed label sequence with silence
// (the blank) removed.
std::vector<int> ctc_targets(const PhonemeAlignment& alignment);

struct MappingOptions {
  int steps = 200;
  double learning_rate = 5.0;
  // Before the first step, reset the slots that occur in the pairs with
  // flat_start_entries.
  bool flat_start = true;
  int threads = 1;
};

struct MappingResult {
  Codebook codebook;
  // Mean per-frame log-likelihood before each step, plus the final value.
  std::vector<double> trace;
};

// Uniform segmentation of each utterance over its collapsed label sequence
// (silence kept); slot v becomes the mean of its frames. Slots that receive
// no frame keep their value.
void flat_start_entries(
    std::span<const std::pair<FrameSequence, PhonemeAlignment>> pairs,
    Matrix& entries);

// Gradient ascent on sum_u log P(Y_u | Z_u) / sum_u T_u with respect to the
// codebook entries only. Slot v stays bound to inventory symbol v; a
// 40-entry result is labeled with the inventory.
MappingResult map_codebook(
    std::span<const std::pair<FrameSequence, PhonemeAlignment>> pairs,
    Codebook codebook, const MappingOptions& options);

}  // namespace irrm

#endif  // IRRM_CTC_HPP_
