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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "irrm/errors.hpp"
#include "irrm/random.hpp"
#include "irrm/types.hpp"

namespace irrm {

PhonemeInventory::PhonemeInventory(std::vector<std::string> symbols)
    : symbols_(std::move(symbols)) {}

const PhonemeInventory& PhonemeInventory::cmu() {
  static const PhonemeInventory inventory({
      "SIL", "AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",
      "DH",  "EH", "ER", "EY", "F",  "G",  "HH", "IH", "IY", "JH",
      "K",   "L",  "M",  "N",  "NG", "OW", "OY", "P",  "R",  "S",
      "SH",  "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH",
  });
  return inventory;
}

const std::string& PhonemeInventory::symbol(int index) const {
  if (index < 0 || index >= size()) {
    throw VocabularyError("phoneme index out of range: " +
                          std::to_string(index));
  }
  return symbols_[index];
}

std::optional<int> PhonemeInventory::find(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) return std::nullopt;
  return static_cast<int>(it - symbols_.begin());
}

int PhonemeInventory::index(std::string_view symbol) const {
  auto found = find(symbol);
  if (!found) {
    throw VocabularyError("unknown phoneme symbol: " + std::string(symbol));
  }
  return *found;
}

void FrameSequence::validate() const {
  if (frames.rows() < 1 || frames.cols() < 1) {
    throw ValidationError("frame sequence must have T >= 1 and d >= 1");
  }
  if (!frames.allFinite()) {
    throw ValidationError("frame sequence contains non-finite values");
  }
  if (!(frame_duration > 0.0) || !std::isfinite(frame_duration)) {
    throw ValidationError("frame_duration must be positive");
  }
}

Codebook::Codebook(std::vector<Matrix> groups,
                   std::optional<std::vector<std::string>> labels)
    : groups_(std::move(groups)), labels_(std::move(labels)) {
  validate();
}

Codebook Codebook::random(int groups, int entries, int dim, std::uint64_t seed,
                          double scale) {
  if (groups < 1 || entries < 1 || dim < 1 || dim % groups != 0) {
    throw ValidationError("codebook shape requires dim divisible by groups");
  }
  Rng rng = keyed_stream(seed, StreamTag::kCodebookInit);
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<Matrix> mats;
  for (int g = 0; g < groups; ++g) {
    Matrix m(entries, dim / groups);
    for (int v = 0; v < entries; ++v) {
      for (int j = 0; j < m.cols(); ++j) m(v, j) = normal(rng);
    }
    mats.push_back(std::move(m));
  }
  return Codebook(std::move(mats));
}

int Codebook::entries() const {
  return groups_.empty() ? 0 : static_cast<int>(groups_.front().rows());
}

int Codebook::group_dim() const {
  return groups_.empty() ? 0 : static_cast<int>(groups_.front().cols());
}

void Codebook::set_labels(std::optional<std::vector<std::string>> labels) {
  labels_ = std::move(labels);
  validate();
}

void Codebook::validate() const {
  if (groups_.empty()) throw ValidationError("codebook has no groups");
  for (const auto& g : groups_) {
    if (g.rows() < 1 || g.cols() < 1) {
      throw ValidationError("codebook group is empty");
    }
    if (g.rows() != groups_.front().rows() ||
        g.cols() != groups_.front().cols()) {
      throw ValidationError("codebook groups differ in shape");
    }
    if (!g.allFinite()) {
      throw ValidationError("codebook contains non-finite entries");
    }
  }
  if (labels_) {
    const auto& inv = PhonemeInventory::cmu();
    if (groups() != 1 || entries() != inv.size()) {
      throw ValidationError("labels require a single group of 40 entries");
    }
    std::set<std::string> seen;
    for (const auto& l : *labels_) {
      if (!inv.find(l)) throw VocabularyError("unknown codeword label: " + l);
      seen.insert(l);
    }
    if (static_cast<int>(seen.size()) != inv.size() ||
        static_cast<int>(labels_->size()) != inv.size()) {
      throw ValidationError("codeword labels must be a bijection onto the "
                            "phoneme inventory");
    }
  }
}

bool Codebook::operator==(const Codebook& other) const {
  if (groups_.size() != other.groups_.size()) return false;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].rows() != other.groups_[g].rows() ||
        groups_[g].cols() != other.groups_[g].cols() ||
        groups_[g] != other.groups_[g]) {
      return false;
    }
  }
  return labels_ == other.labels_;
}

std::int64_t QuantizedSequence::key(int t, int entries) const {
  std::int64_t k = 0;
  for (int g = 0; g < groups; ++g) k = k * entries + index(t, g);
  return k;
}

void QuantizedSequence::validate(const Codebook& codebook) const {
  const int T = length();
  if (groups != codebook.groups() ||
      static_cast<int>(indices.size()) != T * groups ||
      vectors.cols() != codebook.dim()) {
    throw ValidationError("quantized sequence does not match codebook shape");
  }
  const int d = codebook.group_dim();
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < groups; ++g) {
      int v = index(t, g);
      if (v < 0 || v >= codebook.entries()) {
        throw ValidationError("codeword index out of range");
      }
      if (vectors.row(t).segment(g * d, d) != codebook.group(g).row(v)) {
        throw ValidationError("quantized vector differs from its codeword");
      }
    }
  }
}

QuantizedSequence make_quantized(const Codebook& codebook,
                                 std::vector<int> indices, bool corrected) {
  const int G = codebook.groups();
  if (indices.empty() || indices.size() % G != 0) {
    throw ValidationError("index list length must be a multiple of groups");
  }
  const int T = static_cast<int>(indices.size()) / G;
  const int d = codebook.group_dim();
  QuantizedSequence q;
  q.groups = G;
  q.corrected = corrected;
  q.vectors.resize(T, codebook.dim());
  for (int t = 0; t < T; ++t) {
    for (int g = 0; g < G; ++g) {
      int v = indices[t * G + g];
      if (v < 0 || v >= codebook.entries()) {
        throw ValidationError("codeword index out of range");
      }
      q.vectors.row(t).segment(g * d, d) = codebook.group(g).row(v);
    }
  }
  q.indices = std::move(indices);
  return q;
}

std::vector<int> PhonemeAlignment::collapsed() const {
  std::vector<int> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(s.phoneme);
  return out;
}

std::vector<int> PhonemeAlignment::boundaries() const {
  std::vector<int> out;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    out.push_back(segments[i].start);
  }
  return out;
}

void PhonemeAlignment::validate() const {
  if (segments.empty()) throw ValidationError("alignment has no segments");
  int expected = 0;
  for (const auto& s : segments) {
    if (s.start != expected) {
      std::ostringstream msg;
      msg << "alignment is not contiguous at frame " << expected
          << " (segment starts at " << s.start << ")";
      throw ValidationError(msg.str());
    }
    if (s.end <= s.start) {
      throw ValidationError("alignment segment must have start < end");
    }
    if (s.phoneme < 0 || s.phoneme >= PhonemeInventory::kSize) {
      throw VocabularyError("alignment phoneme index out of range");
    }
    expected = s.end;
  }
}

void TrainConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be positive");
    }
  };
  positive(tau_start, "tau_start");
  positive(tau_end, "tau_end");
  positive(beta, "beta");
  positive(kappa, "kappa");
  positive(min_peak_gap, "min_peak_gap");
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be non-negative");
  if (win < 1) throw ValidationError("win must be >= 1");
  if (k_neighbors < 1) throw ValidationError("k_neighbors must be >= 1");
  if (num_negatives < 0) throw ValidationError("num_negatives must be >= 0");
  if (!(mask_prob > 0.0 && mask_prob < 1.0)) {
    throw ValidationError("mask_prob must lie in (0, 1)");
  }
  if (mask_span < 1) throw ValidationError("mask_span must be >= 1");
  if (!(learning_rate >= 0.0)) {
    throw ValidationError("learning_rate must be non-negative");
  }
  if (!(map_learning_rate >= 0.0)) {
    throw ValidationError("map_learning_rate must be non-negative");
  }
  if (steps < 0 || map_steps < 0) throw ValidationError("steps must be >= 0");
  if (hidden_dim < 1 || embed_dim < 1 || context_taps < 1) {
    throw ValidationError("model dimensions must be >= 1");
  }
  if (!(warmup_fraction >= 0.0 && warmup_fraction <= 1.0)) {
    throw ValidationError("warmup_fraction must lie in [0, 1]");
  }
  if (map_utterances < 0) throw ValidationError("map_utterances must be >= 0");
}

}  // namespace irrm
