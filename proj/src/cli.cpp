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

#include "irrm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "irrm/checkpoint.hpp"
#include "irrm/config.hpp"
#include "irrm/corpus.hpp"
#include "irrm/ctc.hpp"
#include "irrm/errors.hpp"
#include "irrm/eval.hpp"
#include "irrm/io.hpp"
#include "irrm/parallel.hpp"
#include "irrm/quantizer.hpp"
#include "irrm/random.hpp"
#include "irrm/segmenter.hpp"
#include "irrm/trainer.hpp"

namespace irrm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for bad flag values discovered after CLI11 has parsed the line.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

// "0.25" stays, "0" becomes "0.0" so rates always read as decimals.
std::string decimal(double value) {
  std::string s = format_double(value);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

/// Config-file and per-key override flags shared by the training-related
/// subcommands. Precedence: flags, then --config, then the base config.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::string min_gap_ms;
  std::string k;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config_path, "key=value config file");
    for (const auto& key : config_keys()) {
      if (key != "threads") values[key];
    }
    for (auto& [key, storage] : values) {
      sub->add_option("--" + dashed(key), storage, "config: " + key);
    }
    sub->add_option("--k", k, "alias of --k-neighbors");
    sub->add_option("--min-gap-ms", min_gap_ms,
                    "minimum boundary spacing in milliseconds");
  }

  TrainConfig resolve(TrainConfig base) const {
    TrainConfig c = base;
    try {
      if (!config_path.empty()) c = load_config(config_path, c);
      for (const auto& [key, value] : values) {
        if (app->count("--" + dashed(key)) > 0) set_config_value(c, key, value);
      }
      if (app->count("--k") > 0) set_config_value(c, "k_neighbors", k);
      if (app->count("--min-gap-ms") > 0) {
        TrainConfig probe;
        set_config_value(probe, "min_peak_gap", min_gap_ms);
        c.min_peak_gap = probe.min_peak_gap / 1000.0;
      }
      c.validate();
    } catch (const FormatError& e) {
      throw UsageError(e.what());
    } catch (const ValidationError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir + ": " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void log_config(std::ostream& err, const std::string& command,
                const TrainConfig& config, int threads) {
  err << "irrm " << command << ": seed=" << config.seed
      << " threads=" << threads << "\n";
  std::istringstream lines(format_config(config));
  for (std::string line; std::getline(lines, line);) {
    err << "  " << line << "\n";
  }
}

std::string trace_csv(const std::vector<StepRecord>& trace) {
  std::ostringstream out;
  out << "step,utterance,tau,l_contrastive,l_rm,l_total,mean_commit_distance\n";
  for (const auto& r : trace) {
    out << r.step << ',' << r.utterance << ',' << format_double(r.tau) << ','
        << format_double(r.l_contrastive) << ',' << format_double(r.l_rm)
        << ',' << format_double(r.l_total) << ','
        << format_double(r.mean_commit_distance) << '\n';
  }
  return out.str();
}

std::string mapping_csv(const std::vector<double>& trace) {
  std::ostringstream out;
  out << "iteration,mean_log_likelihood\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << i << ',' << format_double(trace[i]) << '\n';
  }
  return out.str();
}

json per_json(const PerResult& r) {
  return {{"rate", r.rate},
          {"deletions", r.deletions},
          {"substitutions", r.substitutions},
          {"insertions", r.insertions},
          {"reference_length", r.reference_length}};
}

void emit(std::ostream& out, bool as_json, const std::string& command,
          const json& result, const std::string& text) {
  if (as_json) {
    json doc = {{"schema_version", kJsonSchemaVersion},
                {"command", command},
                {"result", result}};
    out << doc.dump(2) << "\n";
  } else {
    out << text;
  }
}

// ---------------------------------------------------------------- gen-corpus

struct GenCorpusArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t anchor_seed = 1;
  int utterances = 50;
  int input_dim = 12;
  double anchor_scale = 1.0;
  double noise = 0.1;
  int min_duration = 4;
  int max_duration = 10;
  int min_phonemes = 6;
  int max_phonemes = 12;
  std::vector<std::string> phonemes;
  double frame_duration = 0.02;
  std::string shift_phoneme;
  std::string shift_toward;
  double shift_scale = 0.0;
};

// Unit direction for an accent shift, fixed by the anchor seed so source
// and target corpora agree on it.
Vector shift_direction(int input_dim, std::uint64_t anchor_seed, int phoneme) {
  Rng rng = keyed_stream(anchor_seed, StreamTag::kCorpus,
                         {0xACCE17ull, static_cast<std::uint64_t>(phoneme)});
  std::normal_distribution<double> normal;
  Vector v(input_dim);
  for (int i = 0; i < input_dim; ++i) v(i) = normal(rng);
  return v / v.norm();
}

int run_gen_corpus(const GenCorpusArgs& a, int threads, bool as_json,
                   std::ostream& out, std::ostream& err) {
  SyntheticCorpusSpec spec =
      SyntheticCorpusSpec::standard(a.input_dim, a.anchor_seed, a.anchor_scale);
  spec.seed = a.seed;
  spec.utterances = a.utterances;
  spec.noise_scale = a.noise;
  spec.min_duration = a.min_duration;
  spec.max_duration = a.max_duration;
  spec.min_phonemes = a.min_phonemes;
  spec.max_phonemes = a.max_phonemes;
  spec.frame_duration = a.frame_duration;
  std::string pool_text;
  for (const auto& sym : a.phonemes) {
    try {
      spec.phoneme_pool.push_back(PhonemeInventory::cmu().index(sym));
    } catch (const VocabularyError& e) {
      throw UsageError(e.what());
    }
    pool_text += (pool_text.empty() ? "" : ",") + sym;
  }
  if (!a.shift_toward.empty() && a.shift_phoneme.empty()) {
    throw UsageError("--shift-toward needs --shift-phoneme");
  }
  if (!a.shift_phoneme.empty()) {
    int shifted = -1;
    int toward = -1;
    try {
      shifted = PhonemeInventory::cmu().index(a.shift_phoneme);
      if (!a.shift_toward.empty()) {
        toward = PhonemeInventory::cmu().index(a.shift_toward);
      }
    } catch (const VocabularyError& e) {
      throw UsageError(e.what());
    }
    const Vector direction =
        toward < 0 ? shift_direction(a.input_dim, a.anchor_seed, shifted)
                   : Vector(spec.anchors.row(toward) - spec.anchors.row(shifted));
    spec.shift_phoneme(shifted, a.shift_scale * direction);
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  std::ostringstream echo;
  echo << "seed=" << a.seed << "\nanchor_seed=" << a.anchor_seed
       << "\nutterances=" << a.utterances << "\ninput_dim=" << a.input_dim
       << "\nanchor_scale=" << format_double(a.anchor_scale)
       << "\nnoise=" << format_double(a.noise)
       << "\nmin_duration=" << a.min_duration
       << "\nmax_duration=" << a.max_duration
       << "\nmin_phonemes=" << a.min_phonemes
       << "\nmax_phonemes=" << a.max_phonemes
       << "\nphonemes=" << pool_text
       << "\nframe_duration=" << format_double(a.frame_duration)
       << "\nshift_phoneme=" << a.shift_phoneme
       << "\nshift_toward=" << a.shift_toward
       << "\nshift_scale=" << format_double(a.shift_scale) << "\n";
  err << "irrm gen-corpus: seed=" << a.seed << " threads=" << threads << "\n";

  const Corpus corpus = generate_corpus(spec, threads);
  make_dir(a.out);
  save_corpus(corpus, a.out);
  write_text_file(join(a.out, "config.txt"), echo.str());

  long frames = 0;
  for (const auto& u : corpus) frames += u.features.length();
  json result = {{"out", a.out},
                 {"utterances", corpus.size()},
                 {"frames", frames},
                 {"input_dim", a.input_dim},
                 {"shift_phoneme", a.shift_phoneme}};
  std::ostringstream text;
  text << "wrote " << corpus.size() << " utterances (" << frames
       << " frames) to " << a.out << "\n";
  emit(out, as_json, "gen-corpus", result, text.str());
  return 0;
}

// ----------------------------------------------------------------------- map

struct MapArgs {
  std::string corpus;
  std::string out;
  std::string init;
  double init_scale = 0.1;
  ConfigFlags flags;
};

int run_map(const MapArgs& a, int threads, bool as_json, std::ostream& out,
            std::ostream& err) {
  TrainConfig config = a.flags.resolve({});
  config.threads = threads;
  log_config(err, "map", config, threads);
  const Corpus corpus = load_corpus(a.corpus);
  if (corpus.empty()) throw Error("corpus is empty: " + a.corpus);
  const int dim = corpus.front().features.dim();
  Codebook init = a.init.empty()
                      ? Codebook::random(1, PhonemeInventory::kSize, dim,
                                         config.seed, a.init_scale)
                      : load_codebook(a.init);
  const int count =
      config.map_utterances > 0
          ? std::min<int>(config.map_utterances, static_cast<int>(corpus.size()))
          : static_cast<int>(corpus.size());
  std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs;
  for (int i = 0; i < count; ++i) {
    pairs.emplace_back(corpus[i].features, corpus[i].alignment);
  }
  const MappingResult mapped = map_codebook(
      pairs, std::move(init),
      {config.map_steps, config.map_learning_rate, config.map_flat_start,
       threads});

  make_dir(a.out);
  save_codebook(mapped.codebook, join(a.out, "codebook.bin"));
  write_text_file(join(a.out, "mapping_trace.csv"), mapping_csv(mapped.trace));
  write_text_file(join(a.out, "config.txt"), format_config(config));

  const double first = mapped.trace.front();
  const double last = mapped.trace.back();
  json result = {{"out", a.out},
                 {"utterances", count},
                 {"initial_log_likelihood", first},
                 {"final_log_likelihood", last}};
  std::ostringstream text;
  text << "mapped codebook on " << count << " utterances: mean log-likelihood "
       << format_double(first) << " -> " << format_double(last) << "\n";
  emit(out, as_json, "map", result, text.str());
  return 0;
}

// ------------------------------------------------------------ pretrain/adapt

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string checkpoint;
  std::string codebook;
  std::string eval_corpus;
  double init_scale = 0.1;
  ConfigFlags flags;
};

void write_training_outputs(const std::string& dir, const TrainResult& r,
                            const TrainConfig& config, Phase phase) {
  make_dir(dir);
  Checkpoint ck;
  ck.params = r.params;
  ck.codebook = r.codebook;
  ck.config = config;
  ck.phase = phase;
  ck.steps_done = static_cast<int>(r.trace.size());
  save_checkpoint(ck, join(dir, "checkpoint.bin"));
  save_codebook(r.codebook, join(dir, "codebook.bin"));
  write_text_file(join(dir, "trace.csv"), trace_csv(r.trace));
  write_text_file(join(dir, "config.txt"), format_config(config));
}

int run_pretrain(const TrainArgs& a, int threads, bool as_json,
                 std::ostream& out, std::ostream& err) {
  TrainConfig config = a.flags.resolve({});
  config.threads = threads;
  log_config(err, "pretrain", config, threads);
  const Corpus corpus = load_corpus(a.corpus);
  if (corpus.empty()) throw Error("corpus is empty: " + a.corpus);
  const int in_dim = corpus.front().features.dim();
  ModelParams params =
      ModelParams::init(in_dim, config.hidden_dim, config.embed_dim,
                        PhonemeInventory::kSize, config.context_taps,
                        config.seed);
  Codebook codebook =
      a.codebook.empty()
          ? Codebook::random(1, PhonemeInventory::kSize, config.embed_dim,
                             config.seed, a.init_scale)
          : load_codebook(a.codebook);

  const TrainResult r = pretrain(corpus, std::move(params),
                                 std::move(codebook), config);
  write_training_outputs(a.out, r, config, Phase::kPretrain);
  if (!r.mapping_trace.empty()) {
    write_text_file(join(a.out, "mapping_trace.csv"),
                    mapping_csv(r.mapping_trace));
  }

  json result = {{"out", a.out},
                 {"steps", r.trace.size()},
                 {"mapped_at_step", r.mapped_at_step}};
  std::ostringstream text;
  text << "pretrained " << r.trace.size() << " steps";
  if (!r.trace.empty()) {
    const StepRecord& last = r.trace.back();
    result["final"] = {{"l_contrastive", last.l_contrastive},
                       {"l_rm", last.l_rm},
                       {"l_total", last.l_total}};
    text << ", final loss " << format_double(last.l_total);
  }
  if (r.codebook.labels()) {
    const PerResult p = corpus_per(r.params, r.codebook, corpus, config);
    result["per"] = per_json(p);
    text << ", corpus PER " << decimal(p.rate);
  }
  text << "\n";
  emit(out, as_json, "pretrain", result, text.str());
  return 0;
}

int run_adapt(const TrainArgs& a, int threads, bool as_json,
              std::ostream& out, std::ostream& err) {
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  TrainConfig config = a.flags.resolve(ck.config);
  config.threads = threads;
  log_config(err, "adapt", config, threads);
  const Corpus target = load_corpus(a.corpus);
  if (target.empty()) throw Error("corpus is empty: " + a.corpus);
  const Corpus held_out =
      a.eval_corpus.empty() ? Corpus{} : load_corpus(a.eval_corpus);
  const Corpus& scored = a.eval_corpus.empty() ? target : held_out;

  const bool labeled = ck.codebook.labels().has_value();
  PerResult before;
  if (labeled) before = corpus_per(ck.params, ck.codebook, scored, config);
  const TrainResult r = adapt(target, ck.params, ck.codebook, config);
  write_training_outputs(a.out, r, config, Phase::kAdapt);
  const auto rows = codebook_drift(ck.codebook, r.codebook, 3);
  write_text_file(join(a.out, "drift.csv"), drift_csv(rows));

  json top = json::array();
  for (const auto& row : rows) {
    if (row.top) {
      top.push_back({{"phoneme", row.phoneme},
                     {"displacement", row.displacement}});
    }
  }
  json result = {{"out", a.out}, {"steps", r.trace.size()}, {"top_drift", top}};
  std::ostringstream text;
  text << "adapted " << r.trace.size() << " steps; largest drift:";
  for (const auto& row : rows) {
    if (row.top) {
      text << " " << row.phoneme << "=" << format_double(row.displacement);
    }
  }
  text << "\n";
  if (labeled) {
    const PerResult after = corpus_per(r.params, r.codebook, scored, config);
    result["per_before"] = per_json(before);
    result["per_after"] = per_json(after);
    text << "PER before " << decimal(before.rate) << " after "
         << decimal(after.rate) << "\n";
  }
  emit(out, as_json, "adapt", result, text.str());
  return 0;
}

// ------------------------------------------------------------------- segment

struct SegmentArgs {
  std::string features;
  std::string checkpoint;
  std::string codebook;
  std::string out;
  std::string indices_out;
  ConfigFlags flags;
};

int run_segment(const SegmentArgs& a, int threads, bool as_json,
                std::ostream& out, std::ostream& err) {
  std::optional<Checkpoint> ck;
  if (!a.checkpoint.empty()) ck = load_checkpoint(a.checkpoint);
  TrainConfig config = a.flags.resolve(ck ? ck->config : TrainConfig{});
  config.threads = threads;
  log_config(err, "segment", config, threads);
  const FrameSequence features = load_frame_sequence(a.features);
  features.validate();
  if (features.length() < 2) throw DomainError("need at least two frames");
  const int min_gap = min_gap_frames(config.min_peak_gap, features.frame_duration);

  SegmentSet segments;
  std::optional<QuantizedSequence> corrected;
  if (ck) {
    const QuantizedSequence q =
        infer_quantized(ck->params, ck->codebook, features, config, false);
    CorrectionResult c = correct_sequence(q, ck->codebook, config.win,
                                          config.k_neighbors, min_gap);
    segments = std::move(c.segments);
    corrected = std::move(c.corrected);
  } else if (!a.codebook.empty()) {
    const Codebook codebook = load_codebook(a.codebook);
    QuantizerChoice choice;
    const QuantizedSequence q = quantize_sequence(features, codebook, choice);
    CorrectionResult c = correct_sequence(q, codebook, config.win,
                                          config.k_neighbors, min_gap);
    segments = std::move(c.segments);
    corrected = std::move(c.corrected);
  } else {
    const AnomalyScores scores = anomaly_scores(
        window_vectors(features.frames, config.win), config.k_neighbors);
    segments = detect_boundaries(scores, min_gap);
  }

  BoundaryFile file;
  file.boundaries = segments.boundaries;
  file.frames = segments.frames;
  file.frame_duration = features.frame_duration;
  std::ostringstream listing;
  listing << "# frames=" << file.frames
          << " frame_duration=" << format_double(file.frame_duration) << "\n";
  for (int b : file.boundaries) listing << b << "\n";
  if (!a.out.empty()) {
    save_boundaries(file, a.out);
    write_text_file(a.out + ".config.txt", format_config(config));
  }
  if (!a.indices_out.empty()) {
    if (!corrected) {
      throw UsageError("--indices-out needs --codebook or --checkpoint");
    }
    std::ostringstream idx;
    for (int t = 0; t < corrected->length(); ++t) {
      idx << corrected->index(t) << "\n";
    }
    write_text_file(a.indices_out, idx.str());
  }

  json result = {{"frames", file.frames},
                 {"frame_duration", file.frame_duration},
                 {"boundaries", file.boundaries}};
  emit(out, as_json, "segment", result, a.out.empty() ? listing.str() : "");
  if (!as_json && !a.out.empty()) {
    out << "wrote " << file.boundaries.size() << " boundaries to " << a.out
        << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ eval-per

struct EvalPerArgs {
  std::string ref;
  std::string hyp;
  std::string out;
};

int run_eval_per(const EvalPerArgs& a, bool as_json, std::ostream& out) {
  const auto refs = load_phoneme_lines(a.ref);
  const auto hyps = load_phoneme_lines(a.hyp);
  if (refs.size() != hyps.size()) {
    throw ValidationError("reference has " + std::to_string(refs.size()) +
                          " lines but hypothesis has " +
                          std::to_string(hyps.size()));
  }
  std::vector<PerResult> results;
  std::vector<double> rates;
  std::ostringstream csv;
  csv << "utterance,reference_length,deletions,substitutions,insertions,per\n";
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const PerResult r = per(refs[i], hyps[i]);
    results.push_back(r);
    rates.push_back(r.rate);
    csv << i << ',' << r.reference_length << ',' << r.deletions << ','
        << r.substitutions << ',' << r.insertions << ','
        << format_double(r.rate) << '\n';
  }
  if (!a.out.empty()) write_text_file(a.out, csv.str());
  const PerResult pooled = pooled_per(results);
  const MeanSe se = mean_standard_error(rates);
  json result = per_json(pooled);
  result["utterances"] = results.size();
  result["mean"] = se.mean;
  result["standard_error"] = se.standard_error;
  std::ostringstream text;
  text << "PER " << decimal(pooled.rate) << "\n"
       << "D=" << pooled.deletions << " S=" << pooled.substitutions
       << " I=" << pooled.insertions << " N=" << pooled.reference_length
       << "\nmean " << decimal(se.mean) << " +- "
       << decimal(se.standard_error) << " over " << results.size()
       << " utterances\n";
  emit(out, as_json, "eval-per", result, text.str());
  return 0;
}

// ------------------------------------------------------------------ eval-seg

struct EvalSegArgs {
  std::string ref;
  std::string hyp;
  std::string out;
  double tolerance_ms = 10.0;
};

BoundaryFile load_reference(const std::string& path) {
  if (fs::path(path).extension() == ".ali") {
    const PhonemeAlignment ali = load_alignment(path);
    BoundaryFile f;
    f.boundaries = ali.boundaries();
    f.frames = ali.frames();
    return f;
  }
  return load_boundaries(path);
}

int run_eval_seg(const EvalSegArgs& a, bool as_json, std::ostream& out) {
  if (!(a.tolerance_ms >= 0.0)) throw UsageError("tolerance must be >= 0");
  BoundaryFile ref = load_reference(a.ref);
  const BoundaryFile hyp = load_boundaries(a.hyp);
  if (fs::path(a.ref).extension() == ".ali") {
    ref.frame_duration = hyp.frame_duration;
  }
  if (ref.frames != hyp.frames) {
    throw ValidationError("reference covers " + std::to_string(ref.frames) +
                          " frames but hypothesis covers " +
                          std::to_string(hyp.frames));
  }
  auto seconds = [](const BoundaryFile& f) {
    std::vector<double> s;
    for (int b : f.boundaries) s.push_back(b * f.frame_duration);
    return s;
  };
  const auto rs = seconds(ref);
  const auto hs = seconds(hyp);
  const BoundaryMetrics m = boundary_metrics(
      rs, hs, a.tolerance_ms / 1000.0, hyp.frames * hyp.frame_duration);
  std::ostringstream csv;
  csv << "precision,recall,f_score,r_value,overlap,matches,ref_count,"
         "hyp_count\n"
      << format_double(m.precision) << ',' << format_double(m.recall) << ','
      << format_double(m.f_score) << ',' << format_double(m.r_value) << ','
      << format_double(m.overlap) << ',' << m.matches << ',' << m.ref_count
      << ',' << m.hyp_count << '\n';
  if (!a.out.empty()) write_text_file(a.out, csv.str());
  json result = {{"precision", m.precision}, {"recall", m.recall},
                 {"f_score", m.f_score},     {"r_value", m.r_value},
                 {"overlap", m.overlap},     {"matches", m.matches},
                 {"ref_count", m.ref_count}, {"hyp_count", m.hyp_count}};
  emit(out, as_json, "eval-seg", result, csv.str());
  return 0;
}

// -------------------------------------------------------------- export-drift

struct DriftArgs {
  std::string before;
  std::string after;
  std::string out;
  int top = 3;
};

Codebook load_codebook_or_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  if (in && std::string(magic, 4) == "IRCK") {
    return load_checkpoint(path).codebook;
  }
  return load_codebook(path);
}

int run_export_drift(const DriftArgs& a, bool as_json, std::ostream& out) {
  if (a.top < 0) throw UsageError("--top must be >= 0");
  const auto rows = codebook_drift(load_codebook_or_checkpoint(a.before),
                                   load_codebook_or_checkpoint(a.after), a.top);
  const std::string csv = drift_csv(rows);
  if (!a.out.empty()) write_text_file(a.out, csv);
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"phoneme", r.phoneme},
                     {"displacement", r.displacement},
                     {"top", r.top}});
  }
  emit(out, as_json, "export-drift", {{"rows", table}},
       a.out.empty() ? csv : "wrote " + std::to_string(rows.size()) +
                                 " rows to " + a.out + "\n");
  return 0;
}

constexpr const char* kCsvNotes =
    "CSV column orders:\n"
    "  trace.csv          step,utterance,tau,l_contrastive,l_rm,l_total,"
    "mean_commit_distance\n"
    "  mapping_trace.csv  iteration,mean_log_likelihood\n"
    "  drift.csv          phoneme,displacement,top,before_0..,after_0..\n"
    "  eval-per --out     utterance,reference_length,deletions,"
    "substitutions,insertions,per\n"
    "  eval-seg           precision,recall,f_score,r_value,overlap,matches,"
    "ref_count,hyp_count\n"
    "Thread count: --threads, else the IRRM_THREADS environment variable, "
    "else 1.\n";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Phoneme-level codebook learning with risk-minimized "
               "adaptation"};
  app.footer(kCsvNotes);
  app.require_subcommand(1, 1);
  int threads_flag = 0;
  bool as_json = false;
  app.add_option("--threads", threads_flag, "worker threads (0 = default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--json", as_json, "print a JSON summary on stdout");

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "generate a synthetic corpus");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "utterance seed");
  gen_cmd->add_option("--anchor-seed", gen.anchor_seed, "phoneme anchor seed");
  gen_cmd->add_option("--utterances", gen.utterances)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--input-dim", gen.input_dim)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--anchor-scale", gen.anchor_scale);
  gen_cmd->add_option("--noise", gen.noise, "per-coordinate noise scale");
  gen_cmd->add_option("--min-duration", gen.min_duration);
  gen_cmd->add_option("--max-duration", gen.max_duration);
  gen_cmd->add_option("--min-phonemes", gen.min_phonemes);
  gen_cmd->add_option("--max-phonemes", gen.max_phonemes);
  gen_cmd->add_option("--phonemes", gen.phonemes,
                      "comma-separated phoneme pool (default: all)")
      ->delimiter(',');
  gen_cmd->add_option("--frame-duration", gen.frame_duration, "seconds");
  gen_cmd->add_option("--shift-phoneme", gen.shift_phoneme,
                      "phoneme whose anchor the accent moves");
  gen_cmd->add_option("--shift-toward", gen.shift_toward,
                      "move toward this phoneme's anchor instead of a random "
                      "direction");
  gen_cmd->add_option("--shift-scale", gen.shift_scale,
                      "offset length, or fraction of the anchor gap with "
                      "--shift-toward");

  MapArgs map;
  auto* map_cmd = app.add_subcommand(
      "map", "fit a labeled codebook to feature/alignment pairs by CTC");
  map_cmd->add_option("--corpus", map.corpus, "corpus directory")
      ->required();
  map_cmd->add_option("--out", map.out, "output directory")->required();
  map_cmd->add_option("--init", map.init, "initial codebook file");
  map_cmd->add_option("--init-scale", map.init_scale,
                      "scale of the random initial codebook");
  map.flags.attach(map_cmd);

  TrainArgs pre;
  auto* pre_cmd = app.add_subcommand("pretrain", "pre-train on a corpus");
  pre_cmd->add_option("--corpus", pre.corpus, "corpus directory")
      ->required();
  pre_cmd->add_option("--out", pre.out, "output directory")->required();
  pre_cmd->add_option("--codebook", pre.codebook,
                      "initial codebook (labeled skips mapping)");
  pre_cmd->add_option("--init-scale", pre.init_scale,
                      "scale of the random initial codebook");
  pre.flags.attach(pre_cmd);

  TrainArgs ad;
  auto* ad_cmd = app.add_subcommand("adapt", "adapt a checkpoint to a target corpus");
  ad_cmd->add_option("--checkpoint", ad.checkpoint, "pre-trained checkpoint")
      ->required();
  ad_cmd->add_option("--corpus", ad.corpus, "target corpus directory")
      ->required();
  ad_cmd->add_option("--eval-corpus", ad.eval_corpus,
                     "corpus scored before and after (default: --corpus)");
  ad_cmd->add_option("--out", ad.out, "output directory")->required();
  ad.flags.attach(ad_cmd);

  SegmentArgs seg;
  auto* seg_cmd = app.add_subcommand("segment", "detect phoneme boundaries");
  seg_cmd->add_option("--features", seg.features, "feature file (.csv or binary)")
      ->required();
  auto* seg_ck = seg_cmd->add_option("--checkpoint", seg.checkpoint,
                                     "encode and quantize with a checkpoint");
  seg_cmd->add_option("--codebook", seg.codebook,
                      "quantize the features directly with a codebook")
      ->excludes(seg_ck);
  seg_cmd->add_option("--out", seg.out, "boundary file (default: stdout)");
  seg_cmd->add_option("--indices-out", seg.indices_out,
                      "corrected codeword index per frame");
  seg.flags.attach(seg_cmd);

  EvalPerArgs ep;
  auto* ep_cmd = app.add_subcommand("eval-per", "phoneme error rate");
  ep_cmd->add_option("--ref", ep.ref, "reference phoneme lines")
      ->required();
  ep_cmd->add_option("--hyp", ep.hyp, "hypothesis phoneme lines")
      ->required();
  ep_cmd->add_option("--out", ep.out, "per-utterance CSV");

  EvalSegArgs es;
  auto* es_cmd = app.add_subcommand("eval-seg", "boundary precision/recall/F/R-value");
  es_cmd->add_option("--ref", es.ref, "reference boundary file or .ali alignment")
      ->required();
  es_cmd->add_option("--hyp", es.hyp, "hypothesis boundary file")
      ->required();
  es_cmd->add_option("--tolerance-ms", es.tolerance_ms, "match tolerance");
  es_cmd->add_option("--out", es.out, "metrics CSV");

  DriftArgs dr;
  auto* dr_cmd = app.add_subcommand("export-drift", "codeword displacement table");
  dr_cmd->add_option("--before", dr.before, "codebook or checkpoint")
      ->required();
  dr_cmd->add_option("--after", dr.after, "codebook or checkpoint")
      ->required();
  dr_cmd->add_option("--top", dr.top, "rows to mark");
  dr_cmd->add_option("--out", dr.out, "CSV file (default: stdout)");

  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--threads", threads_flag, "worker threads (0 = default)")
        ->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", as_json, "print a JSON summary on stdout");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "irrm: " << e.what() << "\n";
    return 2;
  }

  try {
    const int threads = resolve_threads(threads_flag);
    if (gen_cmd->parsed()) return run_gen_corpus(gen, threads, as_json, out, err);
    if (map_cmd->parsed()) return run_map(map, threads, as_json, out, err);
    if (pre_cmd->parsed()) return run_pretrain(pre, threads, as_json, out, err);
    if (ad_cmd->parsed()) return run_adapt(ad, threads, as_json, out, err);
    if (seg_cmd->parsed()) return run_segment(seg, threads, as_json, out, err);
    if (ep_cmd->parsed()) return run_eval_per(ep, as_json, out);
    if (es_cmd->parsed()) return run_eval_seg(es, as_json, out);
    if (dr_cmd->parsed()) return run_export_drift(dr, as_json, out);
  } catch (const UsageError& e) {
    err << "irrm: " << e.what() << "\n";
    return 2;
  } catch (const TrainingError& e) {
    err << "irrm: " << e.what() << " (after " << e.trace().size()
        << " steps)\n";
    return 1;
  } catch (const std::exception& e) {
    err << "irrm: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace irrm::cli
