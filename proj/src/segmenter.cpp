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

#include "irrm/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "irrm/errors.hpp"

namespace irrm {

std::vector<std::pair<int, int>> SegmentSet::segments() const {
  std::vector<std::pair<int, int>> out;
  int start = 0;
  for (int b : boundaries) {
    out.emplace_back(start, b);
    start = b;
  }
  out.emplace_back(start, frames);
  return out;
}

void SegmentSet::validate(int min_gap) const {
  if (frames < 1) throw ValidationError("segment set has no frames");
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i] <= 0 || boundaries[i] >= frames) {
      throw ValidationError("boundary outside (0, T)");
    }
    if (i > 0 && boundaries[i] - boundaries[i - 1] < min_gap) {
      throw ValidationError("boundaries closer than the minimum gap");
    }
  }
}

Matrix window_vectors(const Matrix& values, int win) {
  if (win < 1) throw DomainError("window length must be >= 1");
  const int T = static_cast<int>(values.rows());
  const int d = static_cast<int>(values.cols());
  const int offset = win / 2;
  Matrix out(T, static_cast<Eigen::Index>(win) * d);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < win; ++j) {
      const int src = std::clamp(t - offset + j, 0, T - 1);
      out.row(t).segment(static_cast<Eigen::Index>(j) * d, d) =
          values.row(src);
    }
  }
  return out;
}

Matrix window_vectors(const QuantizedSequence& quantized, int win) {
  return window_vectors(quantized.vectors, win);
}

AnomalyScores anomaly_scores(const Matrix& windows, int k) {
  const int T = static_cast<int>(windows.rows());
  if (T < 2) throw DomainError("anomaly scoring needs at least two frames");
  if (k < 1) throw DomainError("neighbor count must be >= 1");
  const int kk = std::min(k, T - 1);
  AnomalyScores out;
  out.scores.resize(T);
  std::vector<double> dist;
  dist.reserve(T - 1);
  for (int t = 0; t < T; ++t) {
    dist.clear();
    for (int o = 0; o < T; ++o) {
      if (o == t) continue;
      double d2 = 0.0;
      for (Eigen::Index j = 0; j < windows.cols(); ++j) {
        const double diff = windows(o, j) - windows(t, j);
        d2 += diff * diff;
      }
      dist.push_back(d2);
    }
    std::nth_element(dist.begin(), dist.begin() + (kk - 1), dist.end());
    std::sort(dist.begin(), dist.begin() + kk);
    double s = 0.0;
    for (int i = 0; i < kk; ++i) s += dist[i];
    out.scores(t) = s;
  }
  return out;
}

SegmentSet detect_boundaries(const AnomalyScores& scores, int min_gap) {
  if (min_gap < 1) throw DomainError("minimum gap must be >= 1 frame");
  const Vector& s = scores.scores;
  const int T = static_cast<int>(s.size());
  SegmentSet out;
  out.frames = T;
  std::vector<int> candidates;
  for (int t = 1; t + 1 < T; ++t) {
    if (s(t - 1) < s(t) && s(t) > s(t + 1)) candidates.push_back(t);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return s(a) > s(b); });
  std::vector<int> accepted;
  for (int c : candidates) {
    bool clear = std::all_of(accepted.begin(), accepted.end(),
                             [&](int a) { return std::abs(a - c) >= min_gap; });
    if (clear) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end());
  out.boundaries = std::move(accepted);
  return out;
}

QuantizedSequence cluster_correct(const QuantizedSequence& quantized,
                                  const SegmentSet& segments,
                                  const Codebook& codebook) {
  const int T = quantized.length();
  if (segments.frames != T) {
    throw ValidationError("segments do not cover the quantized sequence");
  }
  segments.validate();
  const int G = quantized.groups;
  const int V = codebook.entries();
  std::vector<int> indices = quantized.indices;
  for (auto [start, end] : segments.segments()) {
    std::map<std::int64_t, int> counts;
    for (int t = start; t < end; ++t) ++counts[quantized.key(t, V)];
    int best_t = start;
    int best_count = 0;
    // Scanning in time order with a strict comparison keeps the earliest
    // occurrence among tied majorities.
    for (int t = start; t < end; ++t) {
      int c = counts[quantized.key(t, V)];
      if (c > best_count) {
        best_count = c;
        best_t = t;
      }
    }
    for (int t = start; t < end; ++t) {
      for (int g = 0; g < G; ++g) {
        indices[t * G + g] = quantized.index(best_t, g);
      }
    }
  }
  return make_quantized(codebook, std::move(indices), true);
}

SegmentSet collapse_runs(const QuantizedSequence& quantized) {
  const int T = quantized.length();
  if (T < 1) throw DomainError("empty sequence");
  SegmentSet out;
  out.frames = T;
  for (int t = 1; t < T; ++t) {
    bool same = true;
    for (int g = 0; g < quantized.groups; ++g) {
      same = same && quantized.index(t, g) == quantized.index(t - 1, g);
    }
    if (!same) out.boundaries.push_back(t);
  }
  return out;
}

SegmentSet greedy_nseg(const QuantizedSequence& quantized, int n) {
  SegmentSet runs = collapse_runs(quantized);
  const int initial = static_cast<int>(runs.boundaries.size()) + 1;
  if (n < 1 || n > initial) {
    throw DomainError("target segment count must lie in [1, " +
                      std::to_string(initial) + "]");
  }
  struct Piece {
    int start;
    int end;
    Vector mean;
  };
  std::vector<Piece> pieces;
  for (auto [start, end] : runs.segments()) {
    Vector mean = quantized.vectors.row(start).transpose();
    pieces.push_back({start, end, std::move(mean)});
  }
  while (static_cast<int>(pieces.size()) > n) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      double dist = (pieces[i].mean - pieces[i + 1].mean).norm();
      if (dist < best_dist) {
        best_dist = dist;
        best = i;
      }
    }
    Piece& a = pieces[best];
    const Piece& b = pieces[best + 1];
    const double wa = a.end - a.start;
    const double wb = b.end - b.start;
    a.mean = (wa * a.mean + wb * b.mean) / (wa + wb);
    a.end = b.end;
    pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  SegmentSet out;
  out.frames = quantized.length();
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    out.boundaries.push_back(pieces[i].start);
  }
  return out;
}

int min_gap_frames(double gap_seconds, double frame_duration) {
  if (!(frame_duration > 0.0) || !(gap_seconds >= 0.0)) {
    throw DomainError("gap and frame duration must be positive");
  }
  // The small slack absorbs representation error in e.g. 0.06 / 0.02.
  const int frames =
      static_cast<int>(std::ceil(gap_seconds / frame_duration - 1e-9));
  return std::max(1, frames);
}

CorrectionResult correct_sequence(const QuantizedSequence& quantized,
                                  const Codebook& codebook, int win, int k,
                                  int min_gap) {
  CorrectionResult out;
  const int T = quantized.length();
  if (T < 2) {
    out.scores.scores = Vector::Zero(T);
    out.segments.frames = T;
    out.corrected = quantized;
    out.corrected.corrected = true;
    return out;
  }
  out.scores = anomaly_scores(window_vectors(quantized, win), k);
  out.segments = detect_boundaries(out.scores, min_gap);
  out.corrected = cluster_correct(quantized, out.segments, codebook);
  return out;
}

}  // namespace irrm
