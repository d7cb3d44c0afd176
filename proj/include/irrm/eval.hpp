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

#ifndef IRRM_EVAL_HPP_
#define IRRM_EVAL_HPP_

#include <span>
#include <string>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

struct PerResult {
  double rate = 0.0;
  int deletions = 0;
  int substitutions = 0;
  int insertions = 0;
  int reference_length = 0;

  int errors() const { return deletions + substitutions + insertions; }
};

// Unit-cost edit distance; rate = (D + S + I) / |ref|. The backtrace prefers
// the diagonal (match or substitution), then insertion, then deletion.
// An empty reference raises DomainError.
PerResult per(std::span<const int> ref, std::span<const int> hyp);
// Symbols outside the CMU inventory raise VocabularyError.
PerResult per(const std::vector<std::string>& ref,
              const std::vector<std::string>& hyp);

// Pools counts over utterances: sum of errors / sum of reference lengths.
PerResult pooled_per(std::span<const PerResult> results);

struct MeanSe {
  double mean = 0.0;
  double standard_error = 0.0;
  int count = 0;
};
// Sample standard deviation over sqrt(n); zero for n < 2.
MeanSe mean_standard_error(std::span<const double> values);

struct BoundaryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  double r_value = 0.0;
  double overlap = 0.0;
  int matches = 0;
  int ref_count = 0;
  int hyp_count = 0;
};

// Boundaries in seconds, sorted ascending. Matching is one-to-one and
// greedy over all (ref, hyp) pairs within tolerance, closest pair first,
// which makes the result symmetric in ref and hyp. R-value uses
// OS = |hyp| / |ref| - 1 and is clamped to [0, 1]. Overlap is the fraction
// of [0, total_duration) covered by each hypothesis segment's best
// overlapping reference segment.
BoundaryMetrics boundary_metrics(std::span<const double> ref,
                                 std::span<const double> hyp, double tolerance,
                                 double total_duration);

double segment_overlap(std::span<const double> ref,
                       std::span<const double> hyp, double total_duration);

struct DriftRow {
  int slot = 0;
  std::string phoneme;
  double displacement = 0.0;
  bool top = false;
  Vector before;
  Vector after;
};

// Per-codeword displacement |after - before|, sorted descending (lower
// slot first on ties), with the first top_n rows marked.
std::vector<DriftRow> codebook_drift(const Codebook& before,
                                     const Codebook& after, int top_n);

// Columns: phoneme, displacement, top, before_0.., after_0..
std::string drift_csv(const std::vector<DriftRow>& rows);

}  // namespace irrm

#endif  // IRRM_EVAL_HPP_
