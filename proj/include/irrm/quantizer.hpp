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

#ifndef IRRM_QUANTIZER_HPP_
#define IRRM_QUANTIZER_HPP_

#include <cstdint>

#include "irrm/types.hpp"

namespace irrm {

struct QuantizerChoice {
  QuantizerScheme scheme = QuantizerScheme::kKMeans;
  double tau = 2.0;
  // Gumbel only: (G*V) x d logits projection and bias, rows grouped by
  // codebook group.
  Matrix projection;
  Vector projection_bias;

  void validate(const Codebook& codebook) const;
};

struct KMeansSelection {
  int index = 0;
  Vector value;
};

// Nearest entry in Euclidean distance, lowest index on ties. The forward
// value is the entry itself; backward is the straight-through contract
// z_bar = z + e_v - sg(z): the output gradient is passed unchanged both to
// z and to e_v, and unselected entries receive nothing.
KMeansSelection quantize_km(const Vector& z, const Matrix& entries);

struct KMeansGradients {
  Vector grad_z;
  Vector grad_entry;  // for entries.row(index) only
};
KMeansGradients km_backward(const Vector& grad_output);

struct GumbelSelection {
  int index = 0;
  Vector probs;
};

// p_j = softmax((l_j + r_j) / tau); hard index = argmax p (lowest index on
// ties). Throws DomainError for tau <= 0.
GumbelSelection quantize_gs(const Vector& logits, double tau,
                            const Vector& noise);

// Backward through the soft probabilities: given dL/dp returns dL/dlogits.
Vector gs_logits_backward(const Vector& probs, const Vector& grad_probs,
                          double tau);

// r = -log(-log(u)), u ~ U(0, 1), drawn from a stream keyed by
// (seed, stream, frame) so frames can be evaluated in any order.
Vector gumbel_noise(int size, std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t frame);

double anneal_tau(int step, int total_steps, double tau_start,
                  double tau_end);

// Quantizes every frame. With G > 1 the frame splits evenly across groups
// and the per-group selections are concatenated. Gumbel noise uses
// gumbel_noise(seed, stream, t); pass noiseless = true to select by argmax
// of the logits alone.
QuantizedSequence quantize_sequence(const FrameSequence& frames,
                                    const Codebook& codebook,
                                    const QuantizerChoice& choice,
                                    std::uint64_t seed = 0,
                                    std::uint64_t stream = 0,
                                    bool noiseless = false);

}  // namespace irrm

#endif  // IRRM_QUANTIZER_HPP_
