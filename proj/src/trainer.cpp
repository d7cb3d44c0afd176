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

#include "irrm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "irrm/ctc.hpp"
#include "irrm/errors.hpp"
#include "irrm/parallel.hpp"
#include "irrm/quantizer.hpp"
#include "irrm/random.hpp"
#include "irrm/segmenter.hpp"

namespace irrm {
namespace {

std::uint64_t step_stream(Phase phase, int step) {
  return (static_cast<std::uint64_t>(phase) << 40) |
         static_cast<std::uint64_t>(step);
}

void check_shapes(const ModelParams& params, const Codebook& codebook,
                  const FrameSequence& inputs) {
  if (codebook.groups() != 1) {
    throw ValidationError("training uses a single-group codebook");
  }
  if (params.embed_dim() != codebook.dim()) {
    throw ValidationError("encoder output and codebook dimensions differ");
  }
  if (params.gs_projection.rows() != codebook.entries()) {
    throw ValidationError("Gumbel projection rows differ from codebook size");
  }
  if (inputs.dim() != params.input_dim()) {
    throw ValidationError("input features do not match the encoder");
  }
}

std::vector<std::vector<int>> sample_negatives(
    const std::vector<int>& positions, int count, std::uint64_t seed,
    std::uint64_t stream) {
  Rng rng = keyed_stream(seed, StreamTag::kNegatives, {stream});
  const int m = static_cast<int>(positions.size());
  const int n = std::min(count, m - 1);
  std::vector<std::vector<int>> out(m);
  std::vector<int> pool;
  for (int i = 0; i < m; ++i) {
    pool.clear();
    for (int j = 0; j < m; ++j) {
      if (j != i) pool.push_back(positions[j]);
    }
    // Partial Fisher-Yates: the first n entries are a uniform sample.
    for (int k = 0; k < n; ++k) {
      std::uniform_int_distribution<int> pick(k, static_cast<int>(pool.size()) - 1);
      std::swap(pool[k], pool[pick(rng)]);
    }
    out[i].assign(pool.begin(), pool.begin() + n);
  }
  return out;
}

}  // namespace

MaskResult apply_mask(const Matrix& sequence, double mask_prob, int span_len,
                      std::uint64_t seed, const Vector& mask_embedding,
                      std::uint64_t stream) {
  if (!(mask_prob > 0.0 && mask_prob < 1.0)) {
    throw DomainError("mask_prob must lie in (0, 1)");
  }
  if (span_len < 1) throw DomainError("span length must be >= 1");
  if (mask_embedding.size() != sequence.cols()) {
    throw ValidationError("mask embedding dimension differs from sequence");
  }
  const int T = static_cast<int>(sequence.rows());
  if (T < 1) throw DomainError("cannot mask an empty sequence");
  Rng rng = keyed_stream(seed, StreamTag::kMask, {stream});
  std::bernoulli_distribution start(mask_prob);
  MaskResult out;
  out.is_masked.assign(T, 0);
  while (out.positions.empty()) {
    for (int t = 0; t < T; ++t) {
      if (start(rng)) {
        for (int j = t; j < std::min(T, t + span_len); ++j) {
          out.is_masked[j] = 1;
        }
      }
    }
    for (int t = 0; t < T; ++t) {
      if (out.is_masked[t]) out.positions.push_back(t);
    }
  }
  out.masked = sequence;
  for (int t : out.positions) out.masked.row(t) = mask_embedding.transpose();
  return out;
}

StepResult train_step(const ModelParams& params, const Codebook& codebook,
                      const FrameSequence& inputs, const TrainConfig& config,
                      Phase phase, int step, int total_steps) {
  check_shapes(params, codebook, inputs);
  const Matrix& entries = codebook.group(0);
  const int T = inputs.length();
  const int V = codebook.entries();
  const std::uint64_t stream = step_stream(phase, step);

  StepPlan plan;
  plan.tau = anneal_tau(step, total_steps, config.tau_start, config.tau_end);
  const EncoderCache enc = encode(params, inputs.frames);
  plan.selected.resize(T);
  if (config.scheme == QuantizerScheme::kKMeans) {
    for (int t = 0; t < T; ++t) {
      plan.selected[t] = quantize_km(enc.z.row(t).transpose(), entries).index;
    }
  } else {
    plan.noise.resize(T, V);
    plan.probs_anchor.resize(T, V);
    for (int t = 0; t < T; ++t) {
      const Vector logits =
          params.gs_projection * enc.z.row(t).transpose() + params.gs_bias;
      const Vector noise = gumbel_noise(V, config.seed, stream, t);
      const GumbelSelection sel = quantize_gs(logits, plan.tau, noise);
      plan.noise.row(t) = noise.transpose();
      plan.probs_anchor.row(t) = sel.probs.transpose();
      plan.selected[t] = sel.index;
    }
  }
  plan.corrected = plan.selected;
  if (config.cluster_correction && T >= 2) {
    const QuantizedSequence raw = make_quantized(codebook, plan.selected, false);
    plan.corrected =
        correct_sequence(raw, codebook, config.win, config.k_neighbors,
                         min_gap_frames(config.min_peak_gap,
                                        inputs.frame_duration))
            .corrected.indices;
  }
  const MaskResult mask = apply_mask(enc.z, config.mask_prob, config.mask_span,
                                     config.seed, params.mask_embedding, stream);
  plan.mask_positions = mask.positions;
  plan.is_masked = mask.is_masked;
  plan.negatives = sample_negatives(plan.mask_positions, config.num_negatives,
                                    config.seed, stream);
  plan.z_anchor = enc.z;
  plan.z_hat_anchor.resize(T, entries.cols());
  for (int t = 0; t < T; ++t) {
    plan.z_hat_anchor.row(t) = entries.row(plan.corrected[t]);
  }
  return evaluate_plan(params, codebook, inputs, config, plan);
}

StepResult evaluate_plan(const ModelParams& params, const Codebook& codebook,
                         const FrameSequence& inputs,
                         const TrainConfig& config, const StepPlan& plan) {
  check_shapes(params, codebook, inputs);
  const Matrix& entries = codebook.group(0);
  const int T = inputs.length();
  const int V = codebook.entries();
  const Eigen::Index d = entries.cols();
  const bool gumbel = config.scheme == QuantizerScheme::kGumbel;

  const EncoderCache enc = encode(params, inputs.frames);
  const Matrix& z = enc.z;

  // Straight-through outputs: forward value e_{v_t}, gradient path through
  // z (k-means) or through the soft probabilities (Gumbel).
  Matrix z_hat(T, d);
  Matrix probs;
  if (gumbel) {
    probs.resize(T, V);
    for (int t = 0; t < T; ++t) {
      const Vector logits =
          params.gs_projection * z.row(t).transpose() + params.gs_bias;
      probs.row(t) = quantize_gs(logits, plan.tau, plan.noise.row(t).transpose())
                         .probs.transpose();
      const Vector soft_delta =
          (probs.row(t) - plan.probs_anchor.row(t)).transpose();
      z_hat.row(t) = entries.row(plan.corrected[t]) +
                     (entries.transpose() * soft_delta).transpose();
    }
  } else {
    for (int t = 0; t < T; ++t) {
      z_hat.row(t) =
          entries.row(plan.corrected[t]) + z.row(t) - plan.z_anchor.row(t);
    }
  }

  Matrix context_in = z_hat;
  for (int t : plan.mask_positions) {
    context_in.row(t) = params.mask_embedding.transpose();
  }
  const Matrix context = context_forward(params, context_in);

  const int M = static_cast<int>(plan.mask_positions.size());
  if (M < 1) throw DomainError("step plan has no masked frames");
  Matrix grad_z_hat = Matrix::Zero(T, d);
  Matrix grad_context = Matrix::Zero(T, d);
  Matrix grad_entries = Matrix::Zero(V, d);
  Matrix grad_z = Matrix::Zero(T, d);
  double l_contrastive = 0.0;
  double l_rm = 0.0;
  for (int i = 0; i < M; ++i) {
    const int t = plan.mask_positions[i];
    const auto& neg = plan.negatives[i];
    Matrix distractors(static_cast<Eigen::Index>(neg.size()), d);
    for (std::size_t k = 0; k < neg.size(); ++k) {
      distractors.row(static_cast<Eigen::Index>(k)) = z_hat.row(neg[k]);
    }
    const ContrastiveResult c =
        contrastive_loss(context.row(t).transpose(), z_hat.row(t).transpose(),
                         distractors, config.kappa);
    l_contrastive += c.loss / M;
    grad_context.row(t) += c.grad_context.transpose() / M;
    grad_z_hat.row(t) += c.grad_target.transpose() / M;
    for (std::size_t k = 0; k < neg.size(); ++k) {
      grad_z_hat.row(neg[k]) +=
          c.grad_distractors.row(static_cast<Eigen::Index>(k)) / M;
    }

    const int v = plan.corrected[t];
    const RmResult rm = rm_loss_split(
        z.row(t).transpose(), plan.z_anchor.row(t).transpose(),
        entries.row(v).transpose(), plan.z_hat_anchor.row(t).transpose(),
        config.beta);
    l_rm += rm.loss / M;
    grad_entries.row(v) += config.gamma * rm.grad_z_hat.transpose() / M;
    grad_z.row(t) += config.gamma * rm.grad_z.transpose() / M;
  }

  StepResult out;
  out.grad = ModelParams::zeros_like(params);
  const Matrix grad_context_in =
      context_backward(params, context_in, grad_context, out.grad);
  for (int t = 0; t < T; ++t) {
    if (plan.is_masked[t]) {
      out.grad.mask_embedding += grad_context_in.row(t).transpose();
    } else {
      grad_z_hat.row(t) += grad_context_in.row(t);
    }
  }

  for (int t = 0; t < T; ++t) {
    const Vector g = grad_z_hat.row(t).transpose();
    grad_entries.row(plan.corrected[t]) += g.transpose();
    if (!gumbel) {
      grad_z.row(t) += g.transpose();
      continue;
    }
    const Vector p = probs.row(t).transpose();
    const Vector soft_delta = p - plan.probs_anchor.row(t).transpose();
    grad_entries += soft_delta * g.transpose();
    const Vector grad_probs = entries * g;
    const Vector grad_logits = gs_logits_backward(p, grad_probs, plan.tau);
    out.grad.gs_projection += grad_logits * z.row(t);
    out.grad.gs_bias += grad_logits;
    grad_z.row(t) += (params.gs_projection.transpose() * grad_logits).transpose();
  }
  encoder_backward(params, inputs.frames, enc, grad_z, out.grad);

  out.codebook_grad = std::move(grad_entries);
  out.report.l_contrastive = l_contrastive;
  out.report.l_rm = l_rm;
  out.report.l_total = total_loss(l_contrastive, l_rm, config.gamma);
  out.report.gradients["codebook"] = out.codebook_grad;
  for (const auto& b : out.grad.blocks()) {
    out.report.gradients[b.name] = Eigen::Map<const Matrix>(b.data, b.size, 1);
  }
  double commit = 0.0;
  for (int t = 0; t < T; ++t) {
    commit += (z.row(t) - entries.row(plan.corrected[t])).norm();
  }
  out.mean_commit_distance = commit / T;
  out.plan = plan;
  return out;
}

namespace {

TrainResult run_training(const Corpus& corpus, ModelParams params,
                         Codebook codebook, const TrainConfig& config,
                         Phase phase) {
  config.validate();
  if (corpus.empty()) throw DomainError("training corpus is empty");
  const int n = static_cast<int>(corpus.size());
  const int steps = config.steps;
  TrainResult result;
  bool need_mapping = phase == Phase::kPretrain && !codebook.labels() &&
                      config.map_utterances > 0;
  const int warmup =
      static_cast<int>(std::llround(config.warmup_fraction * steps));
  std::vector<int> order(n);
  std::vector<double> totals;

  for (int step = 0; step <= steps; ++step) {
    if (need_mapping && step == warmup) {
      const int count = std::min(config.map_utterances, n);
      std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs;
      for (int i = 0; i < count; ++i) {
        FrameSequence z;
        z.frames = encode(params, corpus[i].features.frames).z;
        z.frame_duration = corpus[i].features.frame_duration;
        z.utterance_id = corpus[i].features.utterance_id;
        pairs.emplace_back(std::move(z), corpus[i].alignment);
      }
      MappingResult mapped = map_codebook(
          pairs, std::move(codebook),
          {config.map_steps, config.map_learning_rate, config.map_flat_start,
           config.threads});
      codebook = std::move(mapped.codebook);
      result.mapping_trace = std::move(mapped.trace);
      result.mapped_at_step = step;
      need_mapping = false;
    }
    if (step == steps) break;

    if (step % n == 0) {
      std::iota(order.begin(), order.end(), 0);
      Rng rng = keyed_stream(config.seed, StreamTag::kShuffle,
                             {static_cast<std::uint64_t>(phase),
                              static_cast<std::uint64_t>(step / n)});
      std::shuffle(order.begin(), order.end(), rng);
    }
    const int u = order[step % n];
    StepResult res;
    try {
      res = train_step(params, codebook, corpus[u].features, config, phase,
                       step, steps);
    } catch (const DomainError& e) {
      throw TrainingError(std::string("training step failed: ") + e.what(),
                          totals);
    }
    totals.push_back(res.report.l_total);
    if (!std::isfinite(res.report.l_total) || !res.grad.all_finite() ||
        !res.codebook_grad.allFinite()) {
      throw TrainingError("non-finite loss at step " + std::to_string(step),
                          totals);
    }
    params.axpy(-config.learning_rate, res.grad);
    codebook.group(0) -= config.learning_rate * res.codebook_grad;

    StepRecord rec;
    rec.step = step;
    rec.utterance = u;
    rec.tau = res.plan.tau;
    rec.l_contrastive = res.report.l_contrastive;
    rec.l_rm = res.report.l_rm;
    rec.l_total = res.report.l_total;
    rec.mean_commit_distance = res.mean_commit_distance;
    result.trace.push_back(rec);
  }
  result.params = std::move(params);
  result.codebook = std::move(codebook);
  return result;
}

}  // namespace

TrainResult pretrain(const Corpus& corpus, ModelParams params,
                     Codebook codebook, const TrainConfig& config) {
  return run_training(corpus, std::move(params), std::move(codebook), config,
                      Phase::kPretrain);
}

TrainResult adapt(const Corpus& target, ModelParams params, Codebook codebook,
                  const TrainConfig& config) {
  const Matrix before = codebook.group(0);
  TrainResult result = run_training(target, std::move(params),
                                    std::move(codebook), config, Phase::kAdapt);
  result.drift = result.codebook.group(0) - before;
  return result;
}

QuantizedSequence infer_quantized(const ModelParams& params,
                                  const Codebook& codebook,
                                  const FrameSequence& inputs,
                                  const TrainConfig& config, bool correct) {
  check_shapes(params, codebook, inputs);
  FrameSequence z;
  z.frames = encode(params, inputs.frames).z;
  z.frame_duration = inputs.frame_duration;
  QuantizerChoice choice;
  choice.scheme = config.scheme;
  choice.tau = config.tau_end;
  choice.projection = params.gs_projection;
  choice.projection_bias = params.gs_bias;
  QuantizedSequence q =
      quantize_sequence(z, codebook, choice, config.seed, 0, true);
  if (correct && config.cluster_correction && q.length() >= 2) {
    q = correct_sequence(q, codebook, config.win, config.k_neighbors,
                         min_gap_frames(config.min_peak_gap,
                                        inputs.frame_duration))
            .corrected;
  }
  return q;
}

std::vector<int> recognize(const ModelParams& params, const Codebook& codebook,
                           const FrameSequence& inputs,
                           const TrainConfig& config) {
  const QuantizedSequence q =
      infer_quantized(params, codebook, inputs, config, true);
  std::vector<int> out;
  int prev = -1;
  for (int t = 0; t < q.length(); ++t) {
    const int v = q.index(t);
    if (v != prev && v != PhonemeInventory::kBlank) out.push_back(v);
    prev = v;
  }
  return out;
}

PerResult corpus_per(const ModelParams& params, const Codebook& codebook,
                     const Corpus& corpus, const TrainConfig& config) {
  const int n = static_cast<int>(corpus.size());
  std::vector<PerResult> parts(n);
  std::vector<char> used(n, 0);
  parallel_for(n, resolve_threads(config.threads), [&](int i) {
    const auto ref = ctc_targets(corpus[i].alignment);
    if (ref.empty()) return;
    parts[i] = per(ref, recognize(params, codebook, corpus[i].features, config));
    used[i] = 1;
  });
  std::vector<PerResult> kept;
  for (int i = 0; i < n; ++i) {
    if (used[i]) kept.push_back(parts[i]);
  }
  return pooled_per(kept);
}

double mean_commit_distance(const ModelParams& params,
                            const Codebook& codebook, const Corpus& corpus,
                            const TrainConfig& config) {
  const int n = static_cast<int>(corpus.size());
  std::vector<double> sums(n, 0.0);
  std::vector<int> counts(n, 0);
  parallel_for(n, resolve_threads(config.threads), [&](int i) {
    const QuantizedSequence q =
        infer_quantized(params, codebook, corpus[i].features, config, true);
    const Matrix z = encode(params, corpus[i].features.frames).z;
    for (int t = 0; t < q.length(); ++t) {
      sums[i] += (z.row(t) - q.vectors.row(t)).norm();
    }
    counts[i] = q.length();
  });
  double total = 0.0;
  long frames = 0;
  for (int i = 0; i < n; ++i) {
    total += sums[i];
    frames += counts[i];
  }
  return frames ? total / frames : 0.0;
}

}  // namespace irrm
