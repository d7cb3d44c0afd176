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

#ifndef IRRM_TRAINER_HPP_
#define IRRM_TRAINER_HPP_

#include <cstdint>
#include <vector>

#include "irrm/corpus.hpp"
#include "irrm/eval.hpp"
#include "irrm/losses.hpp"
#include "irrm/model.hpp"
#include "irrm/types.hpp"

namespace irrm {

enum class Phase : std::uint64_t { kPretrain = 0, kAdapt = 1 };

struct MaskResult {
  Matrix masked;                // input rows with masked rows replaced
  std::vector<int> positions;   // ascending
  std::vector<char> is_masked;  // length T
};

// Each frame starts a span of span_len frames with probability mask_prob;
// spans are unioned and clipped at the end. At least one frame is always
// masked (the draw repeats until one is).
MaskResult apply_mask(const Matrix& sequence, double mask_prob, int span_len,
                      std::uint64_t seed, const Vector& mask_embedding,
                      std::uint64_t stream = 0);

/// Discrete decisions and stop-gradient operands of one training step.
/// Evaluating a step with a fixed plan gives the straight-through surrogate
/// objective, whose exact gradient equals the step's reported gradient.
struct StepPlan {
  double tau = 1.0;
  std::vector<int> selected;   // raw quantizer choice per frame
  std::vector<int> corrected;  // after cluster correction
  std::vector<int> mask_positions;
  std::vector<char> is_masked;
  std::vector<std::vector<int>> negatives;  // frame indices per masked step
  Matrix noise;                // Gumbel draws, T x V (Gumbel scheme only)
  Matrix z_anchor;             // sg(z)
  Matrix z_hat_anchor;         // sg(z_hat)
  Matrix probs_anchor;         // sg(p), Gumbel scheme only
};

struct StepResult {
  LossReport report;
  ModelParams grad;
  Matrix codebook_grad;
  StepPlan plan;
  double mean_commit_distance = 0.0;  // mean |z_t - e_{v_t}| over frames
};

// Builds the plan for (phase, step) and evaluates loss and gradients.
StepResult train_step(const ModelParams& params, const Codebook& codebook,
                      const FrameSequence& inputs, const TrainConfig& config,
                      Phase phase, int step, int total_steps);

// Evaluates the surrogate objective and gradients under a fixed plan.
StepResult evaluate_plan(const ModelParams& params, const Codebook& codebook,
                         const FrameSequence& inputs,
                         const TrainConfig& config, const StepPlan& plan);

struct StepRecord {
  int step = 0;
  int utterance = 0;
  double tau = 0.0;
  double l_contrastive = 0.0;
  double l_rm = 0.0;
  double l_total = 0.0;
  double mean_commit_distance = 0.0;
};

struct TrainResult {
  ModelParams params;
  Codebook codebook;
  std::vector<StepRecord> trace;
  std::vector<double> mapping_trace;
  int mapped_at_step = -1;
  Matrix drift;  // adapt only: after - before, V x d
};

// SGD over utterances (one per step, reshuffled each epoch). An unlabeled
// codebook is mapped once, after warmup_fraction of the steps, on the
// encoded first map_utterances utterances with the encoder frozen.
TrainResult pretrain(const Corpus& corpus, ModelParams params,
                     Codebook codebook, const TrainConfig& config);

// Same loop on target-domain data, no mapping; reports codeword drift.
TrainResult adapt(const Corpus& target, ModelParams params, Codebook codebook,
                  const TrainConfig& config);

// Noise-free quantization of the encoded inputs (argmax logits for the
// Gumbel scheme), optionally followed by cluster correction.
QuantizedSequence infer_quantized(const ModelParams& params,
                                  const Codebook& codebook,
                                  const FrameSequence& inputs,
                                  const TrainConfig& config, bool correct);

// Collapsed corrected codeword sequence with the blank (silence) removed.
std::vector<int> recognize(const ModelParams& params, const Codebook& codebook,
                           const FrameSequence& inputs,
                           const TrainConfig& config);

PerResult corpus_per(const ModelParams& params, const Codebook& codebook,
                     const Corpus& corpus, const TrainConfig& config);

// Mean |z_t - z_hat_t| over every frame of the corpus.
double mean_commit_distance(const ModelParams& params,
                            const Codebook& codebook, const Corpus& corpus,
                            const TrainConfig& config);

}  // namespace irrm

#endif  // IRRM_TRAINER_HPP_
