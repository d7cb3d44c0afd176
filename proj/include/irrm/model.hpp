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

#ifndef IRRM_MODEL_HPP_
#define IRRM_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "irrm/types.hpp"

namespace irrm {

/// Trainable parameters: a two-layer encoder x -> z with RMS-normalized
/// output, the Gumbel logits
/// projection, a causal convolutional context mixer u -> c, and the learned
/// mask embedding. The same struct doubles as a gradient container.
struct ModelParams {
  Matrix enc_w1;  // hidden x input
  Vector enc_b1;
  Matrix enc_w2;  // embed x hidden
  Vector enc_b2;
  Matrix gs_projection;  // entries x embed
  Vector gs_bias;
  std::vector<Matrix> context_taps;  // tap j multiplies u_{t-j}
  Vector context_bias;
  Vector mask_embedding;

  static ModelParams init(int input_dim, int hidden_dim, int embed_dim,
                          int entries, int taps, std::uint64_t seed);
  static ModelParams zeros_like(const ModelParams& other);

  int input_dim() const { return static_cast<int>(enc_w1.cols()); }
  int embed_dim() const { return static_cast<int>(enc_w2.rows()); }

  struct Block {
    std::string name;
    double* data;
    Eigen::Index size;
  };
  // Every parameter tensor as a contiguous block, in a fixed order.
  std::vector<Block> blocks();
  std::vector<const double*> block_data() const;
  std::vector<std::string> block_names() const;

  void axpy(double alpha, const ModelParams& other);
  bool all_finite() const;
  bool operator==(const ModelParams& other) const;
};

struct EncoderCache {
  Matrix hidden;  // tanh activations, T x hidden
  Matrix pre;     // affine output before normalization, T x embed
  Matrix z;       // T x embed, each row rescaled to norm sqrt(embed)
};

EncoderCache encode(const ModelParams& params, const Matrix& inputs);

// Accumulates encoder parameter gradients into grads.
void encoder_backward(const ModelParams& params, const Matrix& inputs,
                      const EncoderCache& cache, const Matrix& grad_z,
                      ModelParams& grads);

// c_t = bias + sum_j taps[j] u_{t-j}, zero before the first frame.
Matrix context_forward(const ModelParams& params, const Matrix& inputs);

// Accumulates context parameter gradients into grads; returns dL/du.
Matrix context_backward(const ModelParams& params, const Matrix& inputs,
                        const Matrix& grad_context, ModelParams& grads);

}  // namespace irrm

#endif  // IRRM_MODEL_HPP_
