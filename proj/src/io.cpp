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

#include "irrm/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"
#include "irrm/config.hpp"
#include "irrm/errors.hpp"

namespace irrm {
namespace {

constexpr char kCodebookMagic[4] = {'I', 'R', 'C', 'B'};
constexpr std::uint32_t kCodebookVersion = 1;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() &&
           std::isspace(static_cast<unsigned char>(line[pos]))) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[end]))) {
      ++end;
    }
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

double to_double(std::string_view s, const char* what) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError(std::string(what) + ": not a number: '" +
                      std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s, const char* what) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw FormatError(std::string(what) + ": not an integer: '" +
                      std::string(s) + "'");
  }
  return v;
}

// Parses "key=value" pairs separated by commas or whitespace.
template <typename Fn>
void parse_header_pairs(std::string_view header, const char* what, Fn&& fn) {
  std::string normalized(header);
  for (auto& ch : normalized) {
    if (ch == ',') ch = ' ';
  }
  for (auto field : split_fields(normalized)) {
    auto eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError(std::string(what) + ": bad header field '" +
                        std::string(field) + "'");
    }
    fn(field.substr(0, eq), field.substr(eq + 1));
  }
}

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw FormatError("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::trunc);
  if (!out) throw FormatError("cannot write file: " + path);
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  auto in = open_in(path, false);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  auto out = open_out(path, false);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FormatError("failed writing file: " + path);
}

FeatureFormat format_from_path(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    return FeatureFormat::kCsv;
  }
  return FeatureFormat::kBinary;
}

FrameSequence parse_frame_csv(std::string_view text,
                              std::string utterance_id) {
  FrameSequence seq;
  seq.utterance_id = std::move(utterance_id);
  int declared_dim = -1;
  std::vector<std::vector<double>> rows;
  bool first = true;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty()) continue;
    if (first && (line.front() == '#' || line.find('=') != line.npos)) {
      first = false;
      if (line.front() == '#') line.remove_prefix(1);
      parse_header_pairs(line, "csv header", [&](auto key, auto value) {
        if (key == "d") {
          declared_dim = to_int(value, "csv header d");
        } else if (key == "frame_duration") {
          seq.frame_duration = to_double(value, "csv header frame_duration");
        } else {
          throw FormatError("csv header: unknown key '" + std::string(key) +
                            "'");
        }
      });
      continue;
    }
    first = false;
    if (line.front() == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = line.find(',', pos);
      auto cell = line.substr(pos, comma == line.npos ? line.npos
                                                      : comma - pos);
      row.push_back(to_double(cell, "csv cell"));
      if (comma == line.npos) break;
      pos = comma + 1;
    }
    int expected = declared_dim > 0
                       ? declared_dim
                       : (rows.empty() ? static_cast<int>(row.size())
                                       : static_cast<int>(rows[0].size()));
    if (static_cast<int>(row.size()) != expected) {
      throw FormatError("csv row " + std::to_string(rows.size() + 1) +
                        " has " + std::to_string(row.size()) +
                        " values, expected " + std::to_string(expected));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("csv contains no frames");
  seq.frames.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t j = 0; j < rows[t].size(); ++j) {
      seq.frames(t, j) = rows[t][j];
    }
  }
  seq.validate();
  return seq;
}

FrameSequence load_frame_sequence(const std::string& path,
                                  FeatureFormat format) {
  if (format == FeatureFormat::kCsv) {
    return parse_frame_csv(read_text_file(path), path);
  }
  auto in = open_in(path, true);
  detail::BinaryReader reader(in, path);
  auto T = reader.get<std::uint32_t>();
  auto d = reader.get<std::uint32_t>();
  double frame_duration = reader.get<double>();
  if (T == 0 || d == 0 || std::uint64_t{T} * d > (std::uint64_t{1} << 28)) {
    throw FormatError(path + ": bad dimensions in binary header");
  }
  FrameSequence seq;
  seq.utterance_id = path;
  seq.frame_duration = frame_duration;
  seq.frames.resize(T, d);
  for (std::uint32_t t = 0; t < T; ++t) {
    for (std::uint32_t j = 0; j < d; ++j) {
      seq.frames(t, j) = reader.get<double>();
    }
  }
  reader.expect_end();
  seq.validate();
  return seq;
}

FrameSequence load_frame_sequence(const std::string& path) {
  return load_frame_sequence(path, format_from_path(path));
}

void save_frame_sequence(const FrameSequence& seq, const std::string& path,
                         FeatureFormat format) {
  seq.validate();
  if (format == FeatureFormat::kCsv) {
    std::ostringstream out;
    out << "# d=" << seq.dim()
        << " frame_duration=" << format_double(seq.frame_duration) << "\n";
    for (int t = 0; t < seq.length(); ++t) {
      for (int j = 0; j < seq.dim(); ++j) {
        if (j) out << ',';
        out << format_double(seq.frames(t, j));
      }
      out << '\n';
    }
    write_text_file(path, out.str());
    return;
  }
  auto out = open_out(path, true);
  detail::BinaryWriter writer(out);
  writer.put<std::uint32_t>(static_cast<std::uint32_t>(seq.length()));
  writer.put<std::uint32_t>(static_cast<std::uint32_t>(seq.dim()));
  writer.put<double>(seq.frame_duration);
  for (int t = 0; t < seq.length(); ++t) {
    for (int j = 0; j < seq.dim(); ++j) {
      writer.put<double>(seq.frames(t, j));
    }
  }
  if (!out) throw FormatError("failed writing file: " + path);
}

PhonemeAlignment parse_alignment(std::string_view text) {
  const auto& inv = PhonemeInventory::cmu();
  PhonemeAlignment alignment;
  int line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw FormatError("alignment line " + std::to_string(line_no) +
                        ": expected 'start end SYMBOL'");
    }
    AlignedSegment seg;
    seg.start = to_int(fields[0], "alignment start");
    seg.end = to_int(fields[1], "alignment end");
    seg.phoneme = inv.index(fields[2]);
    alignment.segments.push_back(seg);
  }
  alignment.validate();
  return alignment;
}

PhonemeAlignment load_alignment(const std::string& path) {
  return parse_alignment(read_text_file(path));
}

void save_alignment(const PhonemeAlignment& alignment,
                    const std::string& path) {
  alignment.validate();
  const auto& inv = PhonemeInventory::cmu();
  std::ostringstream out;
  for (const auto& s : alignment.segments) {
    out << s.start << ' ' << s.end << ' ' << inv.symbol(s.phoneme) << '\n';
  }
  write_text_file(path, out.str());
}

Codebook load_codebook(const std::string& path) {
  auto in = open_in(path, true);
  detail::BinaryReader reader(in, path);
  char magic[4];
  for (char& c : magic) c = reader.get<char>();
  if (std::memcmp(magic, kCodebookMagic, 4) != 0) {
    throw FormatError(path + ": not a codebook file");
  }
  if (reader.get<std::uint32_t>() != kCodebookVersion) {
    throw FormatError(path + ": unsupported codebook version");
  }
  auto G = reader.get<std::uint32_t>();
  auto V = reader.get<std::uint32_t>();
  auto d = reader.get<std::uint32_t>();
  if (G == 0 || V == 0 || d == 0 ||
      std::uint64_t{G} * V * d > (std::uint64_t{1} << 26)) {
    throw FormatError(path + ": bad codebook dimensions");
  }
  std::vector<Matrix> groups;
  for (std::uint32_t g = 0; g < G; ++g) {
    Matrix m(V, d);
    for (std::uint32_t v = 0; v < V; ++v) {
      for (std::uint32_t j = 0; j < d; ++j) m(v, j) = reader.get<double>();
    }
    groups.push_back(std::move(m));
  }
  std::optional<std::vector<std::string>> labels;
  if (reader.get<std::uint32_t>() != 0) {
    labels.emplace();
    for (std::uint32_t v = 0; v < V; ++v) {
      labels->push_back(reader.get_string());
    }
  }
  reader.expect_end();
  return Codebook(std::move(groups), std::move(labels));
}

void save_codebook(const Codebook& codebook, const std::string& path) {
  auto out = open_out(path, true);
  detail::BinaryWriter writer(out);
  for (char c : kCodebookMagic) writer.put<char>(c);
  writer.put<std::uint32_t>(kCodebookVersion);
  writer.put<std::uint32_t>(static_cast<std::uint32_t>(codebook.groups()));
  writer.put<std::uint32_t>(static_cast<std::uint32_t>(codebook.entries()));
  writer.put<std::uint32_t>(static_cast<std::uint32_t>(codebook.group_dim()));
  for (int g = 0; g < codebook.groups(); ++g) {
    const Matrix& m = codebook.group(g);
    for (Eigen::Index v = 0; v < m.rows(); ++v) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) writer.put<double>(m(v, j));
    }
  }
  const auto& labels = codebook.labels();
  writer.put<std::uint32_t>(labels ? 1u : 0u);
  if (labels) {
    for (const auto& l : *labels) writer.put_string(l);
  }
  if (!out) throw FormatError("failed writing file: " + path);
}

BoundaryFile parse_boundaries(std::string_view text) {
  BoundaryFile file;
  bool have_frames = false;
  for (auto raw : split_lines(text)) {
    auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      if (trim(line).empty()) continue;
      parse_header_pairs(line, "boundary header", [&](auto key, auto value) {
        if (key == "frames") {
          file.frames = to_int(value, "boundary header frames");
          have_frames = true;
        } else if (key == "frame_duration") {
          file.frame_duration =
              to_double(value, "boundary header frame_duration");
        }
      });
      continue;
    }
    file.boundaries.push_back(to_int(line, "boundary index"));
  }
  for (std::size_t i = 0; i < file.boundaries.size(); ++i) {
    if (file.boundaries[i] <= 0 ||
        (i > 0 && file.boundaries[i] <= file.boundaries[i - 1]) ||
        (have_frames && file.boundaries[i] >= file.frames)) {
      throw ValidationError("boundaries must be strictly increasing inside "
                            "(0, frames)");
    }
  }
  if (!(file.frame_duration > 0.0)) {
    throw ValidationError("frame_duration must be positive");
  }
  if (!have_frames) {
    file.frames = file.boundaries.empty() ? 1 : file.boundaries.back() + 1;
  }
  return file;
}

BoundaryFile load_boundaries(const std::string& path) {
  return parse_boundaries(read_text_file(path));
}

void save_boundaries(const BoundaryFile& file, const std::string& path) {
  std::ostringstream out;
  out << "# frames=" << file.frames
      << " frame_duration=" << format_double(file.frame_duration) << "\n";
  for (int b : file.boundaries) out << b << "\n";
  write_text_file(path, out.str());
}

std::vector<std::vector<std::string>> load_phoneme_lines(
    const std::string& path) {
  std::vector<std::vector<std::string>> out;
  for (auto raw : split_lines(read_text_file(path))) {
    auto line = trim(raw);
    if (!line.empty() && line.front() == '#') continue;
    std::vector<std::string> symbols;
    for (auto f : split_fields(line)) symbols.emplace_back(f);
    out.push_back(std::move(symbols));
  }
  // A trailing newline does not add an utterance; interior blank lines are
  // empty hypotheses.
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

}  // namespace irrm
