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

#ifndef IRRM_SEGMENTER_HPP_
#define IRRM_SEGMENTER_HPP_

#include <utility>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

struct AnomalyScores {
  Vector scores;
};

/// Boundary frames of a segmentation of [0, frames). A boundary b starts a
/// new segment at frame b.
struct SegmentSet {
  std::vector<int> boundaries;
  int frames = 0;

  std::vector<std::pair<int, int>> segments() const;
  void validate(int min_gap = 1) const;
};

// Row t concatenates the rows t - win/2 .. t - win/2 + win - 1 (edge rows
// replicated), i.e. a centered window for odd win and one extra frame of
// past context for even win. Output is T x (win * d).
Matrix window_vectors(const Matrix& values, int win);
Matrix window_vectors(const QuantizedSequence& quantized, int win);

// s_t = sum of squared distances from window t to its min(k, T - 1)
// nearest other windows of the same sequence (exact search). Distances
// accumulate coordinates in index order and the k smallest are added in
// ascending order, so results do not depend on vectorization.
AnomalyScores anomaly_scores(const Matrix& windows, int k);

// Strict interior local maxima, accepted greedily by descending score
// (earlier index first on ties); a candidate closer than min_gap frames to
// an accepted peak is dropped.
SegmentSet detect_boundaries(const AnomalyScores& scores, int min_gap);

// Replaces every frame's selection by the most frequent selection in its
// segment (earliest occurrence wins ties).
QuantizedSequence cluster_correct(const QuantizedSequence& quantized,
                                  const SegmentSet& segments,
                                  const Codebook& codebook);

// Run-length segments merged pairwise, closest adjacent representatives
// first, until n remain. Representatives are frame-weighted means.
SegmentSet greedy_nseg(const QuantizedSequence& quantized, int n);

// Boundaries wherever consecutive selections differ.
SegmentSet collapse_runs(const QuantizedSequence& quantized);

// ceil(gap_seconds / frame_duration), at least 1.
int min_gap_frames(double gap_seconds, double frame_duration);

struct CorrectionResult {
  AnomalyScores scores;
  SegmentSet segments;
  QuantizedSequence corrected;
};

// Windowing, scoring, peak picking and majority correction in one pass.
// Sequences shorter than two frames are returned unchanged.
CorrectionResult correct_sequence(const QuantizedSequence& quantized,
                                  const Codebook& codebook, int win, int k,
                                  int min_gap);

}  // namespace irrm

#endif  // IRRM_SEGMENTER_HPP_
