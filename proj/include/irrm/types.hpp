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

#ifndef IRRM_TYPES_HPP_
#define IRRM_TYPES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace irrm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// The 39 CMU phonemes plus silence. Silence sits at index 0 and is also
/// the CTC blank.
class PhonemeInventory {
 public:
  static constexpr int kSilence = 0;
  static constexpr int kBlank = kSilence;
  static constexpr int kSize = 40;

  static const PhonemeInventory& cmu();

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(int index) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::optional<int> find(std::string_view symbol) const;
  // Throws VocabularyError for unknown symbols.
  int index(std::string_view symbol) const;

 private:
  explicit PhonemeInventory(std::vector<std::string> symbols);
  std::vector<std::string> symbols_;
};

/// T x d feature matrix; row t is one frame.
struct FrameSequence {
  Matrix frames;
  double frame_duration = 0.02;
  std::string utterance_id;

  int length() const { return static_cast<int>(frames.rows()); }
  int dim() const { return static_cast<int>(frames.cols()); }
  void validate() const;
};

/// G groups of V entries each. The full quantized vector concatenates one
/// entry per group, so dim() == groups() * group_dim().
class Codebook {
 public:
  Codebook() = default;
  explicit Codebook(std::vector<Matrix> groups,
                    std::optional<std::vector<std::string>> labels = {});

  static Codebook random(int groups, int entries, int dim, std::uint64_t seed,
                         double scale = 1.0);

  int groups() const { return static_cast<int>(groups_.size()); }
  int entries() const;
  int group_dim() const;
  int dim() const { return groups() * group_dim(); }

  const Matrix& group(int g) const { return groups_.at(g); }
  Matrix& group(int g) { return groups_.at(g); }
  const std::optional<std::vector<std::string>>& labels() const {
    return labels_;
  }
  void set_labels(std::optional<std::vector<std::string>> labels);

  void validate() const;
  bool operator==(const Codebook& other) const;

 private:
  std::vector<Matrix> groups_;
  std::optional<std::vector<std::string>> labels_;
};

/// Per-frame codeword selections. indices holds T*G entries, frame-major.
struct QuantizedSequence {
  std::vector<int> indices;
  int groups = 1;
  Matrix vectors;
  bool corrected = false;

  int length() const { return static_cast<int>(vectors.rows()); }
  int index(int t, int g = 0) const { return indices[t * groups + g]; }
  // Packs the G selections of frame t into one comparable key.
  std::int64_t key(int t, int entries) const;
  void validate(const Codebook& codebook) const;
};

QuantizedSequence make_quantized(const Codebook& codebook,
                                 std::vector<int> indices, bool corrected);

struct AlignedSegment {
  int start = 0;
  int end = 0;
  int phoneme = 0;
  bool operator==(const AlignedSegment&) const = default;
};

/// Contiguous time-aligned phoneme segments covering [0, T).
struct PhonemeAlignment {
  std::vector<AlignedSegment> segments;

  int frames() const { return segments.empty() ? 0 : segments.back().end; }
  // Label sequence with timing dropped; repeats are kept.
  std::vector<int> collapsed() const;
  // Frame indices where a new segment starts, excluding 0.
  std::vector<int> boundaries() const;
  void validate() const;
};

enum class QuantizerScheme { kKMeans, kGumbel };

struct TrainConfig {
  QuantizerScheme scheme = QuantizerScheme::kKMeans;
  double tau_start = 2.0;
  double tau_end = 0.5;
  double beta = 2.0;
  double gamma = 0.5;
  double kappa = 0.1;
  int num_negatives = 10;
  int win = 10;
  int k_neighbors = 20;
  double min_peak_gap = 0.06;
  bool cluster_correction = true;
  double mask_prob = 0.065;
  int mask_span = 3;
  double learning_rate = 0.01;
  int steps = 500;
  int hidden_dim = 32;
  int embed_dim = 16;
  int context_taps = 4;
  double warmup_fraction = 0.0;
  int map_utterances = 20;
  int map_steps = 200;
  double map_learning_rate = 5.0;
  bool map_flat_start = true;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

}  // namespace irrm

#endif  // IRRM_TYPES_HPP_
