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

#include "irrm/quantizer.hpp"

#include <cmath>

#include "irrm/errors.hpp"
#include "irrm/random.hpp"

namespace irrm {

void QuantizerChoice::validate(const Codebook& codebook) const {
  if (scheme != QuantizerScheme::kGumbel) return;
  if (!(tau > 0.0)) throw DomainError("Gumbel temperature must be positive");
  const int rows = codebook.groups() * codebook.entries();
  if (projection.rows() != rows || projection.cols() != codebook.dim() ||
      projection_bias.size() != rows) {
    throw ValidationError("Gumbel projection shape does not match codebook");
  }
}

KMeansSelection quantize_km(const Vector& z, const Matrix& entries) {
  if (entries.rows() < 1) throw ValidationError("codebook is empty");
  if (z.size() != entries.cols()) {
    throw ValidationError("frame and codebook dimensions differ");
  }
  if (!z.allFinite()) throw ValidationError("frame is not finite");
  int best = 0;
  double best_dist = (entries.row(0).transpose() - z).squaredNorm();
  for (Eigen::Index v = 1; v < entries.rows(); ++v) {
    double dist = (entries.row(v).transpose() - z).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(v);
    }
  }
  return {best, entries.row(best).transpose()};
}

KMeansGradients km_backward(const Vector& grad_output) {
  return {grad_output, grad_output};
}

GumbelSelection quantize_gs(const Vector& logits, double tau,
                            const Vector& noise) {
  if (!(tau > 0.0)) throw DomainError("Gumbel temperature must be positive");
  if (noise.size() != logits.size() || logits.size() < 1) {
    throw ValidationError("logits and noise must share a non-zero length");
  }
  Vector scaled = (logits + noise) / tau;
  const double top = scaled.maxCoeff();
  Vector probs = (scaled.array() - top).exp().matrix();
  probs /= probs.sum();
  int best = 0;
  for (Eigen::Index j = 1; j < probs.size(); ++j) {
    if (probs(j) > probs(best)) best = static_cast<int>(j);
  }
  return {best, std::move(probs)};
}

Vector gs_logits_backward(const Vector& probs, const Vector& grad_probs,
                          double tau) {
  const double inner = probs.dot(grad_probs);
  return (probs.array() * (grad_probs.array() - inner) / tau).matrix();
}

Vector gumbel_noise(int size, std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t frame) {
  Rng rng = keyed_stream(seed, StreamTag::kGumbel, {stream, frame});
  Vector r(size);
  for (int j = 0; j < size; ++j) r(j) = -std::log(-std::log(open_uniform(rng)));
  return r;
}

double anneal_tau(int step, int total_steps, double tau_start,
                  double tau_end) {
  if (total_steps <= 0) return tau_end;
  double frac = static_cast<double>(step) / total_steps;
  if (frac < 0.0) frac = 0.0;
  if (frac > 1.0) frac = 1.0;
  return tau_start + (tau_end - tau_start) * frac;
}

QuantizedSequence quantize_sequence(const FrameSequence& frames,
                                    const Codebook& codebook,
                                    const QuantizerChoice& choice,
                                    std::uint64_t seed, std::uint64_t stream,
                                    bool noiseless) {
  frames.validate();
  choice.validate(codebook);
  if (frames.dim() != codebook.dim()) {
    throw ValidationError("frame dimension " + std::to_string(frames.dim()) +
                          " does not match codebook dimension " +
                          std::to_string(codebook.dim()));
  }
  const int T = frames.length();
  const int G = codebook.groups();
  const int V = codebook.entries();
  const int d = codebook.group_dim();
  std::vector<int> indices(static_cast<std::size_t>(T) * G);
  for (int t = 0; t < T; ++t) {
    const Vector z = frames.frames.row(t).transpose();
    if (choice.scheme == QuantizerScheme::kKMeans) {
      for (int g = 0; g < G; ++g) {
        indices[t * G + g] =
            quantize_km(z.segment(g * d, d), codebook.group(g)).index;
      }
    } else {
      const Vector logits = choice.projection * z + choice.projection_bias;
      const Vector noise = noiseless ? Vector::Zero(G * V)
                                     : gumbel_noise(G * V, seed, stream, t);
      for (int g = 0; g < G; ++g) {
        indices[t * G + g] = quantize_gs(logits.segment(g * V, V), choice.tau,
                                         noise.segment(g * V, V))
                                 .index;
      }
    }
  }
  return make_quantized(codebook, std::move(indices), false);
}

}  // namespace irrm
