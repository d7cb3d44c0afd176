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

#include "irrm/checkpoint.hpp"

#include <fstream>
#include <optional>

#include "binary_io.hpp"
#include "irrm/config.hpp"
#include "irrm/errors.hpp"

namespace irrm {
namespace {

constexpr char kMagic[4] = {'I', 'R', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_codebook(detail::BinaryWriter& w, const Codebook& codebook) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(codebook.groups()));
  for (int g = 0; g < codebook.groups(); ++g) w.put_matrix(codebook.group(g));
  const auto& labels = codebook.labels();
  w.put<std::uint32_t>(labels ? 1u : 0u);
  if (labels) {
    for (const auto& l : *labels) w.put_string(l);
  }
}

Codebook get_codebook(detail::BinaryReader& r) {
  const auto groups = r.get<std::uint32_t>();
  if (groups == 0 || groups > 64) {
    throw FormatError(r.what() + ": bad codebook group count");
  }
  std::vector<Matrix> mats;
  for (std::uint32_t g = 0; g < groups; ++g) mats.push_back(r.get_matrix());
  std::optional<std::vector<std::string>> labels;
  if (r.get<std::uint32_t>() != 0) {
    labels.emplace();
    for (Eigen::Index v = 0; v < mats.front().rows(); ++v) {
      labels->push_back(r.get_string());
    }
  }
  return Codebook(std::move(mats), std::move(labels));
}

}  // namespace

bool Checkpoint::operator==(const Checkpoint& other) const {
  return params == other.params && codebook == other.codebook &&
         format_config(config) == format_config(other.config) &&
         phase == other.phase && steps_done == other.steps_done;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open for writing: " + path);
  detail::BinaryWriter w(out);
  for (char c : kMagic) w.put<char>(c);
  w.put<std::uint32_t>(kVersion);
  w.put_string(format_config(checkpoint.config));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(checkpoint.phase));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(checkpoint.steps_done));

  const ModelParams& p = checkpoint.params;
  w.put_matrix(p.enc_w1);
  w.put_vector(p.enc_b1);
  w.put_matrix(p.enc_w2);
  w.put_vector(p.enc_b2);
  w.put_matrix(p.gs_projection);
  w.put_vector(p.gs_bias);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(p.context_taps.size()));
  for (const auto& tap : p.context_taps) w.put_matrix(tap);
  w.put_vector(p.context_bias);
  w.put_vector(p.mask_embedding);
  put_codebook(w, checkpoint.codebook);
  if (!out) throw FormatError("failed writing file: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint: " + path);
  detail::BinaryReader r(in, path);
  for (char c : kMagic) {
    if (r.get<char>() != c) throw FormatError(path + ": not a checkpoint");
  }
  if (r.get<std::uint32_t>() != kVersion) {
    throw FormatError(path + ": unsupported checkpoint version");
  }
  Checkpoint ck;
  ck.config = parse_config(r.get_string());
  const auto phase = r.get<std::uint32_t>();
  if (phase > 1) throw FormatError(path + ": bad phase");
  ck.phase = static_cast<Phase>(phase);
  ck.steps_done = static_cast<int>(r.get<std::uint32_t>());

  ModelParams& p = ck.params;
  p.enc_w1 = r.get_matrix();
  p.enc_b1 = r.get_vector();
  p.enc_w2 = r.get_matrix();
  p.enc_b2 = r.get_vector();
  p.gs_projection = r.get_matrix();
  p.gs_bias = r.get_vector();
  const auto taps = r.get<std::uint32_t>();
  if (taps == 0 || taps > 1024) throw FormatError(path + ": bad tap count");
  for (std::uint32_t j = 0; j < taps; ++j) {
    p.context_taps.push_back(r.get_matrix());
  }
  p.context_bias = r.get_vector();
  p.mask_embedding = r.get_vector();
  ck.codebook = get_codebook(r);
  r.expect_end();

  const Eigen::Index d = p.enc_w2.rows();
  bool ok = p.enc_b1.size() == p.enc_w1.rows() &&
            p.enc_w2.cols() == p.enc_w1.rows() && p.enc_b2.size() == d &&
            p.gs_projection.cols() == d &&
            p.gs_bias.size() == p.gs_projection.rows() &&
            p.context_bias.size() == d && p.mask_embedding.size() == d &&
            ck.codebook.dim() == d;
  for (const auto& tap : p.context_taps) {
    ok = ok && tap.rows() == d && tap.cols() == d;
  }
  if (!ok) throw FormatError(path + ": inconsistent parameter shapes");
  if (!p.all_finite()) throw FormatError(path + ": non-finite parameters");
  return ck;
}

}  // namespace irrm
