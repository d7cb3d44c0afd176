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

#ifndef IRRM_IO_HPP_
#define IRRM_IO_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

enum class FeatureFormat { kCsv, kBinary };

// ".csv" selects CSV; anything else is the raw binary layout.
FeatureFormat format_from_path(const std::string& path);

// CSV: optional header "d=<int>,frame_duration=<seconds>" (a leading '#'
// is allowed), then one comma-separated row per frame.
// Binary: uint32 T, uint32 d, float64 frame_duration, then T*d float64
// values row-major, all little-endian.
FrameSequence parse_frame_csv(std::string_view text,
                              std::string utterance_id = {});
FrameSequence load_frame_sequence(const std::string& path,
                                  FeatureFormat format);
FrameSequence load_frame_sequence(const std::string& path);
void save_frame_sequence(const FrameSequence& seq, const std::string& path,
                         FeatureFormat format);

// One "start_frame end_frame SYMBOL" per line.
PhonemeAlignment parse_alignment(std::string_view text);
PhonemeAlignment load_alignment(const std::string& path);
void save_alignment(const PhonemeAlignment& alignment,
                    const std::string& path);

// Magic "IRCB", uint32 version, uint32 G, V, group_dim, float64 entries
// (group-major, row-major), uint32 label flag, then V length-prefixed
// label strings when the flag is set.
Codebook load_codebook(const std::string& path);
void save_codebook(const Codebook& codebook, const std::string& path);

// Boundary list: header "# frames=<T> frame_duration=<seconds>", then one
// frame index per line.
struct BoundaryFile {
  std::vector<int> boundaries;
  int frames = 0;
  double frame_duration = 0.02;
};
BoundaryFile parse_boundaries(std::string_view text);
BoundaryFile load_boundaries(const std::string& path);
void save_boundaries(const BoundaryFile& file, const std::string& path);

// Whitespace-separated phoneme symbols, one utterance per line.
std::vector<std::vector<std::string>> load_phoneme_lines(
    const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace irrm

#endif  // IRRM_IO_HPP_
