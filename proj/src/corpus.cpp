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

#include "irrm/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "irrm/errors.hpp"
#include "irrm/io.hpp"
#include "irrm/parallel.hpp"
#include "irrm/random.hpp"

namespace irrm {

Matrix make_anchors(int input_dim, std::uint64_t seed, double scale) {
  if (input_dim < 1) throw ValidationError("input_dim must be >= 1");
  Rng rng = keyed_stream(seed, StreamTag::kAnchors);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix anchors(PhonemeInventory::kSize, input_dim);
  for (Eigen::Index p = 0; p < anchors.rows(); ++p) {
    for (Eigen::Index j = 0; j < anchors.cols(); ++j) {
      anchors(p, j) = normal(rng);
    }
  }
  return anchors;
}

SyntheticCorpusSpec SyntheticCorpusSpec::standard(int input_dim,
                                                  std::uint64_t anchor_seed,
                                                  double anchor_scale) {
  SyntheticCorpusSpec spec;
  spec.anchors = make_anchors(input_dim, anchor_seed, anchor_scale);
  spec.accent_offsets = Matrix::Zero(PhonemeInventory::kSize, input_dim);
  return spec;
}

void SyntheticCorpusSpec::shift_phoneme(int phoneme, const Vector& offset) {
  if (phoneme < 0 || phoneme >= accent_offsets.rows() ||
      offset.size() != accent_offsets.cols()) {
    throw ValidationError("accent offset does not match the anchor table");
  }
  accent_offsets.row(phoneme) = offset.transpose();
}

void SyntheticCorpusSpec::validate() const {
  if (anchors.rows() != PhonemeInventory::kSize || anchors.cols() < 1) {
    throw ValidationError("anchors must be 40 x input_dim");
  }
  if (accent_offsets.rows() != anchors.rows() ||
      accent_offsets.cols() != anchors.cols()) {
    throw ValidationError("accent offsets must match the anchor shape");
  }
  if (!anchors.allFinite() || !accent_offsets.allFinite()) {
    throw ValidationError("anchors and offsets must be finite");
  }
  for (Eigen::Index a = 0; a < anchors.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < anchors.rows(); ++b) {
      if (anchors.row(a) == anchors.row(b)) {
        throw ValidationError("anchors must be pairwise distinct");
      }
    }
  }
  if (min_duration < 3 || max_duration < min_duration) {
    throw ValidationError("durations must satisfy 3 <= min <= max");
  }
  if (min_phonemes < 1 || max_phonemes < min_phonemes) {
    throw ValidationError("phoneme counts must satisfy 1 <= min <= max");
  }
  for (int p : phoneme_pool) {
    if (p <= PhonemeInventory::kSilence || p >= PhonemeInventory::kSize) {
      throw ValidationError("phoneme pool entries must be non-silence slots");
    }
  }
  if (!phoneme_pool.empty() &&
      std::count(phoneme_pool.begin(), phoneme_pool.end(), phoneme_pool[0]) ==
          static_cast<long>(phoneme_pool.size())) {
    throw ValidationError("phoneme pool needs two distinct phonemes");
  }
  if (!(noise_scale >= 0.0)) throw ValidationError("noise_scale must be >= 0");
  if (utterances < 1) throw ValidationError("utterances must be >= 1");
  if (!(frame_duration > 0.0)) {
    throw ValidationError("frame_duration must be positive");
  }
}

Corpus generate_corpus(const SyntheticCorpusSpec& spec, int threads) {
  spec.validate();
  Corpus corpus(spec.utterances);
  parallel_for(spec.utterances, resolve_threads(threads), [&](int i) {
    Rng rng = keyed_stream(spec.seed, StreamTag::kCorpus,
                           {static_cast<std::uint64_t>(i)});
    std::uniform_int_distribution<int> count(spec.min_phonemes,
                                             spec.max_phonemes);
    std::uniform_int_distribution<int> duration(spec.min_duration,
                                                spec.max_duration);
    std::vector<int> pool = spec.phoneme_pool;
    if (pool.empty()) {
      for (int p = 1; p < PhonemeInventory::kSize; ++p) pool.push_back(p);
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(pool.size()) - 1);
    auto phone = [&](Rng& r) { return pool[pick(r)]; };
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<int> phonemes = {PhonemeInventory::kSilence};
    const int n = count(rng);
    for (int k = 0; k < n; ++k) {
      int p = phone(rng);
      while (p == phonemes.back()) p = phone(rng);
      phonemes.push_back(p);
    }
    phonemes.push_back(PhonemeInventory::kSilence);

    PhonemeAlignment alignment;
    int t = 0;
    for (int p : phonemes) {
      int len = duration(rng);
      alignment.segments.push_back({t, t + len, p});
      t += len;
    }
    FrameSequence seq;
    seq.frame_duration = spec.frame_duration;
    std::ostringstream id;
    id << "utt" << std::setw(4) << std::setfill('0') << i;
    seq.utterance_id = id.str();
    seq.frames.resize(t, spec.input_dim());
    for (const auto& s : alignment.segments) {
      for (int f = s.start; f < s.end; ++f) {
        for (int j = 0; j < spec.input_dim(); ++j) {
          seq.frames(f, j) = spec.anchors(s.phoneme, j) +
                             spec.accent_offsets(s.phoneme, j) +
                             spec.noise_scale * normal(rng);
        }
      }
    }
    corpus[i] = Utterance{std::move(seq), std::move(alignment)};
  });
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::ostringstream manifest;
  for (const auto& u : corpus) {
    const std::string& id = u.features.utterance_id;
    if (id.empty() || id.find('/') != std::string::npos) {
      throw ValidationError("utterance id must be a plain file name");
    }
    save_frame_sequence(u.features, directory + "/" + id + ".bin",
                        FeatureFormat::kBinary);
    save_alignment(u.alignment, directory + "/" + id + ".ali");
    manifest << id << "\n";
  }
  write_text_file(directory + "/corpus.txt", manifest.str());
}

Corpus load_corpus(const std::string& directory) {
  Corpus corpus;
  std::istringstream manifest(read_text_file(directory + "/corpus.txt"));
  std::string id;
  while (manifest >> id) {
    Utterance u;
    u.features = load_frame_sequence(directory + "/" + id + ".bin",
                                     FeatureFormat::kBinary);
    u.features.utterance_id = id;
    u.alignment = load_alignment(directory + "/" + id + ".ali");
    if (u.alignment.frames() != u.features.length()) {
      throw ValidationError("alignment of " + id +
                            " does not match its frame count");
    }
    corpus.push_back(std::move(u));
  }
  if (corpus.empty()) throw FormatError(directory + ": corpus is empty");
  return corpus;
}

}  // namespace irrm
