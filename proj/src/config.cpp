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

#include "irrm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "irrm/errors.hpp"

namespace irrm {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw FormatError("config key '" + std::string(key) +
                      "' expects a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw FormatError("config key '" + std::string(key) +
                      "' expects an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw FormatError("config key '" + std::string(key) +
                    "' expects true/false, got '" + std::string(v) + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "scheme",        "tau_start",         "tau_end",
      "beta",          "gamma",             "kappa",
      "num_negatives", "win",               "k_neighbors",
      "min_peak_gap",  "cluster_correction", "mask_prob",
      "mask_span",     "learning_rate",     "steps",
      "hidden_dim",    "embed_dim",         "context_taps",
      "warmup_fraction", "map_utterances",  "map_steps",
      "map_learning_rate", "map_flat_start", "seed",          "threads",
  };
  return keys;
}

void set_config_value(TrainConfig& c, std::string_view key,
                      std::string_view value) {
  value = trim(value);
  if (key == "scheme") {
    if (value == "km") {
      c.scheme = QuantizerScheme::kKMeans;
    } else if (value == "gs") {
      c.scheme = QuantizerScheme::kGumbel;
    } else {
      throw FormatError("scheme must be 'km' or 'gs'");
    }
  } else if (key == "tau_start") {
    c.tau_start = parse_double(key, value);
  } else if (key == "tau_end") {
    c.tau_end = parse_double(key, value);
  } else if (key == "beta") {
    c.beta = parse_double(key, value);
  } else if (key == "gamma") {
    c.gamma = parse_double(key, value);
  } else if (key == "kappa") {
    c.kappa = parse_double(key, value);
  } else if (key == "num_negatives") {
    c.num_negatives = parse_int<int>(key, value);
  } else if (key == "win") {
    c.win = parse_int<int>(key, value);
  } else if (key == "k_neighbors") {
    c.k_neighbors = parse_int<int>(key, value);
  } else if (key == "min_peak_gap") {
    c.min_peak_gap = parse_double(key, value);
  } else if (key == "cluster_correction") {
    c.cluster_correction = parse_bool(key, value);
  } else if (key == "mask_prob") {
    c.mask_prob = parse_double(key, value);
  } else if (key == "mask_span") {
    c.mask_span = parse_int<int>(key, value);
  } else if (key == "learning_rate") {
    c.learning_rate = parse_double(key, value);
  } else if (key == "steps") {
    c.steps = parse_int<int>(key, value);
  } else if (key == "hidden_dim") {
    c.hidden_dim = parse_int<int>(key, value);
  } else if (key == "embed_dim") {
    c.embed_dim = parse_int<int>(key, value);
  } else if (key == "context_taps") {
    c.context_taps = parse_int<int>(key, value);
  } else if (key == "warmup_fraction") {
    c.warmup_fraction = parse_double(key, value);
  } else if (key == "map_utterances") {
    c.map_utterances = parse_int<int>(key, value);
  } else if (key == "map_steps") {
    c.map_steps = parse_int<int>(key, value);
  } else if (key == "map_learning_rate") {
    c.map_learning_rate = parse_double(key, value);
  } else if (key == "map_flat_start") {
    c.map_flat_start = parse_bool(key, value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "threads") {
    c.threads = parse_int<int>(key, value);
  } else {
    throw FormatError("unknown config key: " + std::string(key));
  }
}

TrainConfig parse_config(std::string_view text, TrainConfig base) {
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("config line " + std::to_string(line_no) +
                        " is not key=value");
    }
    set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  base.validate();
  return base;
}

TrainConfig load_config(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string format_config(const TrainConfig& c) {
  std::ostringstream out;
  out << "scheme=" << (c.scheme == QuantizerScheme::kKMeans ? "km" : "gs")
      << "\n";
  out << "tau_start=" << format_double(c.tau_start) << "\n";
  out << "tau_end=" << format_double(c.tau_end) << "\n";
  out << "beta=" << format_double(c.beta) << "\n";
  out << "gamma=" << format_double(c.gamma) << "\n";
  out << "kappa=" << format_double(c.kappa) << "\n";
  out << "num_negatives=" << c.num_negatives << "\n";
  out << "win=" << c.win << "\n";
  out << "k_neighbors=" << c.k_neighbors << "\n";
  out << "min_peak_gap=" << format_double(c.min_peak_gap) << "\n";
  out << "cluster_correction=" << (c.cluster_correction ? "true" : "false")
      << "\n";
  out << "mask_prob=" << format_double(c.mask_prob) << "\n";
  out << "mask_span=" << c.mask_span << "\n";
  out << "learning_rate=" << format_double(c.learning_rate) << "\n";
  out << "steps=" << c.steps << "\n";
  out << "hidden_dim=" << c.hidden_dim << "\n";
  out << "embed_dim=" << c.embed_dim << "\n";
  out << "context_taps=" << c.context_taps << "\n";
  out << "warmup_fraction=" << format_double(c.warmup_fraction) << "\n";
  out << "map_utterances=" << c.map_utterances << "\n";
  out << "map_steps=" << c.map_steps << "\n";
  out << "map_learning_rate=" << format_double(c.map_learning_rate) << "\n";
  out << "map_flat_start=" << (c.map_flat_start ? "true" : "false") << "\n";
  out << "seed=" << c.seed << "\n";
  // threads is omitted: it never changes results.
  return out.str();
}

}  // namespace irrm
