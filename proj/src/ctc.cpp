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

#include "irrm/ctc.hpp"

#include <cmath>
#include <limits>

#include "irrm/errors.hpp"
#include "irrm/parallel.hpp"

namespace irrm {
namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();
constexpr double kDistanceFloor = 1e-12;

double log_sum_exp(double a, double b) {
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

Vector distances(const Vector& z, const Matrix& entries) {
  if (z.size() != entries.cols()) {
    throw ValidationError("frame and codebook dimensions differ");
  }
  return (entries.rowwise() - z.transpose()).rowwise().norm();
}

// Blank-interleaved label sequence: b l1 b l2 ... lS b.
std::vector<int> expand(std::span<const int> labels, int blank) {
  std::vector<int> out;
  out.reserve(2 * labels.size() + 1);
  out.push_back(blank);
  for (int l : labels) {
    if (l == blank) throw DomainError("CTC target contains the blank symbol");
    out.push_back(l);
    out.push_back(blank);
  }
  return out;
}

}  // namespace

void PosteriorSequence::validate() const {
  for (Eigen::Index t = 0; t < probs.rows(); ++t) {
    if (std::abs(probs.row(t).sum() - 1.0) > 1e-9) {
      throw ValidationError("posterior row does not sum to 1");
    }
    if ((probs.row(t).array() <= 0.0).any() ||
        (probs.row(t).array() > 1.0).any()) {
      throw ValidationError("posterior entries must lie in (0, 1]");
    }
  }
}

Vector softmin_log_posterior(const Vector& z, const Matrix& entries) {
  Vector scores = -distances(z, entries);
  const double top = scores.maxCoeff();
  const double log_norm =
      top + std::log((scores.array() - top).exp().sum());
  return (scores.array() - log_norm).matrix();
}

Vector softmin_posterior(const Vector& z, const Matrix& entries) {
  Vector scores = -distances(z, entries);
  Vector p = (scores.array() - scores.maxCoeff()).exp().matrix();
  return p / p.sum();
}

PosteriorSequence softmin_posteriors(const Matrix& frames,
                                     const Matrix& entries) {
  PosteriorSequence out;
  out.probs.resize(frames.rows(), entries.rows());
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    out.probs.row(t) =
        softmin_posterior(frames.row(t).transpose(), entries).transpose();
  }
  return out;
}

Matrix softmin_log_posteriors(const Matrix& frames, const Matrix& entries) {
  Matrix out(frames.rows(), entries.rows());
  for (Eigen::Index t = 0; t < frames.rows(); ++t) {
    out.row(t) =
        softmin_log_posterior(frames.row(t).transpose(), entries).transpose();
  }
  return out;
}

double path_likelihood(const PosteriorSequence& posteriors,
                       std::span<const int> path) {
  if (static_cast<Eigen::Index>(path.size()) != posteriors.probs.rows()) {
    throw ValidationError("path length must equal the number of frames");
  }
  double p = 1.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    if (path[t] < 0 || path[t] >= posteriors.probs.cols()) {
      throw ValidationError("path label out of range");
    }
    p *= posteriors.probs(static_cast<Eigen::Index>(t), path[t]);
  }
  return p;
}

int ctc_min_frames(std::span<const int> labels) {
  int n = static_cast<int>(labels.size());
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] == labels[i - 1]) ++n;
  }
  return n;
}

CtcForwardBackward ctc_forward_backward(const Matrix& log_probs,
                                        std::span<const int> labels,
                                        int blank) {
  const int T = static_cast<int>(log_probs.rows());
  const int V = static_cast<int>(log_probs.cols());
  if (T < 1) throw DomainError("CTC needs at least one frame");
  if (blank < 0 || blank >= V) throw DomainError("blank index out of range");
  for (int l : labels) {
    if (l < 0 || l >= V) throw DomainError("CTC label out of range");
  }
  const std::vector<int> ext = expand(labels, blank);
  if (ctc_min_frames(labels) > T) {
    throw DomainError("CTC target of length " + std::to_string(labels.size()) +
                      " is infeasible in " + std::to_string(T) + " frames");
  }
  const int U = static_cast<int>(ext.size());
  auto can_skip = [&](int u) {
    return u >= 2 && ext[u] != blank && ext[u] != ext[u - 2];
  };

  Matrix alpha = Matrix::Constant(T, U, kLogZero);
  alpha(0, 0) = log_probs(0, ext[0]);
  if (U > 1) alpha(0, 1) = log_probs(0, ext[1]);
  for (int t = 1; t < T; ++t) {
    for (int u = 0; u < U; ++u) {
      double acc = alpha(t - 1, u);
      if (u >= 1) acc = log_sum_exp(acc, alpha(t - 1, u - 1));
      if (can_skip(u)) acc = log_sum_exp(acc, alpha(t - 1, u - 2));
      if (acc != kLogZero) alpha(t, u) = acc + log_probs(t, ext[u]);
    }
  }

  // beta(t, u): log-probability of emitting frames t+1.. given state u at t.
  Matrix beta = Matrix::Constant(T, U, kLogZero);
  beta(T - 1, U - 1) = 0.0;
  if (U > 1) beta(T - 1, U - 2) = 0.0;
  for (int t = T - 2; t >= 0; --t) {
    for (int u = 0; u < U; ++u) {
      double acc = beta(t + 1, u) + log_probs(t + 1, ext[u]);
      if (u + 1 < U) {
        acc = log_sum_exp(acc, beta(t + 1, u + 1) + log_probs(t + 1, ext[u + 1]));
      }
      if (u + 2 < U && can_skip(u + 2)) {
        acc = log_sum_exp(acc, beta(t + 1, u + 2) + log_probs(t + 1, ext[u + 2]));
      }
      beta(t, u) = acc;
    }
  }

  CtcForwardBackward out;
  out.log_likelihood = alpha(T - 1, U - 1);
  if (U > 1) {
    out.log_likelihood = log_sum_exp(out.log_likelihood, alpha(T - 1, U - 2));
  }
  out.occupancy = Matrix::Zero(T, V);
  if (out.log_likelihood == kLogZero) return out;
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u < U; ++u) {
      double lp = alpha(t, u) + beta(t, u);
      if (lp == kLogZero) continue;
      out.occupancy(t, ext[u]) += std::exp(lp - out.log_likelihood);
    }
  }
  return out;
}

double ctc_log_likelihood(const Matrix& log_probs, std::span<const int> labels,
                          int blank) {
  return ctc_forward_backward(log_probs, labels, blank).log_likelihood;
}

double ctc_likelihood(const PosteriorSequence& posteriors,
                      std::span<const int> labels, int blank) {
  Matrix log_probs = posteriors.probs.array().log().matrix();
  return std::exp(ctc_log_likelihood(log_probs, labels, blank));
}

CtcCodebookGradient ctc_codebook_gradient(const Matrix& frames,
                                          const Matrix& entries,
                                          std::span<const int> labels,
                                          int blank) {
  const Eigen::Index T = frames.rows();
  const Eigen::Index V = entries.rows();
  Matrix log_probs = softmin_log_posteriors(frames, entries);
  CtcForwardBackward fb = ctc_forward_backward(log_probs, labels, blank);
  CtcCodebookGradient out;
  out.log_likelihood = fb.log_likelihood;
  out.grad = Matrix::Zero(V, entries.cols());
  // Score a(t, k) = -||z_t - e_k||; d logL / d a = occupancy - posterior.
  // d a / d e_k = (z_t - e_k) / ||z_t - e_k||.
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index k = 0; k < V; ++k) {
      const double weight = fb.occupancy(t, k) - std::exp(log_probs(t, k));
      if (weight == 0.0) continue;
      Vector diff = frames.row(t).transpose() - entries.row(k).transpose();
      const double dist = diff.norm();
      if (dist < kDistanceFloor) continue;
      out.grad.row(k) += (weight / dist) * diff.transpose();
    }
  }
  return out;
}

std::vector<int> ctc_targets(const PhonemeAlignment& alignment) {
  std::vector<int> out;
  for (int p : alignment.collapsed()) {
    if (p != PhonemeInventory::kBlank) out.push_back(p);
  }
  return out;
}

void flat_start_entries(
    std::span<const std::pair<FrameSequence, PhonemeAlignment>> pairs,
    Matrix& entries) {
  const int V = static_cast<int>(entries.rows());
  Matrix sums = Matrix::Zero(V, entries.cols());
  std::vector<long> counts(V, 0);
  for (const auto& [frames, alignment] : pairs) {
    std::vector<int> labels;
    for (const auto& segment : alignment.segments) {
      if (labels.empty() || labels.back() != segment.phoneme) {
        labels.push_back(segment.phoneme);
      }
    }
    const long T = frames.length();
    const long S = static_cast<long>(labels.size());
    if (S == 0) continue;
    for (long t = 0; t < T; ++t) {
      const int v = labels[t * S / T];
      if (v < 0 || v >= V) {
        throw ValidationError("alignment symbol has no codeword slot");
      }
      sums.row(v) += frames.frames.row(t);
      ++counts[v];
    }
  }
  for (int v = 0; v < V; ++v) {
    if (counts[v] > 0) entries.row(v) = sums.row(v) / counts[v];
  }
}

MappingResult map_codebook(
    std::span<const std::pair<FrameSequence, PhonemeAlignment>> pairs,
    Codebook codebook, const MappingOptions& options) {
  if (pairs.empty()) throw DomainError("mapping needs at least one pair");
  if (codebook.groups() != 1) {
    throw ValidationError("mapping requires a single-group codebook");
  }
  const int V = codebook.entries();
  std::vector<std::vector<int>> targets;
  long total_frames = 0;
  for (const auto& [frames, alignment] : pairs) {
    frames.validate();
    alignment.validate();
    if (alignment.frames() != frames.length()) {
      throw ValidationError("alignment length differs from frame count for " +
                            frames.utterance_id);
    }
    if (frames.dim() != codebook.dim()) {
      throw ValidationError("frame and codebook dimensions differ");
    }
    auto target = ctc_targets(alignment);
    for (int l : target) {
      if (l >= V) {
        throw ValidationError("alignment symbol has no codeword slot");
      }
    }
    targets.push_back(std::move(target));
    total_frames += frames.length();
  }

  const int n = static_cast<int>(pairs.size());
  const int threads = resolve_threads(options.threads);
  MappingResult result;
  Matrix& entries = codebook.group(0);
  if (options.flat_start && options.steps > 0) {
    flat_start_entries(pairs, entries);
  }
  std::vector<CtcCodebookGradient> parts(n);
  auto evaluate = [&] {
    parallel_for(n, threads, [&](int i) {
      parts[i] = ctc_codebook_gradient(pairs[i].first.frames, entries,
                                       targets[i]);
    });
    double objective = 0.0;
    Matrix grad = Matrix::Zero(entries.rows(), entries.cols());
    for (int i = 0; i < n; ++i) {
      objective += parts[i].log_likelihood;
      grad += parts[i].grad;
    }
    objective /= static_cast<double>(total_frames);
    grad /= static_cast<double>(total_frames);
    return std::make_pair(objective, grad);
  };
  for (int step = 0; step < options.steps; ++step) {
    auto [objective, grad] = evaluate();
    result.trace.push_back(objective);
    if (!std::isfinite(objective) || !grad.allFinite()) {
      throw TrainingError("codebook mapping diverged at step " +
                              std::to_string(step),
                          result.trace);
    }
    entries += options.learning_rate * grad;
  }
  double final_objective = evaluate().first;
  result.trace.push_back(final_objective);
  if (!std::isfinite(final_objective)) {
    throw TrainingError("codebook mapping ended with a non-finite objective",
                        result.trace);
  }
  if (V == PhonemeInventory::kSize) {
    codebook.set_labels(PhonemeInventory::cmu().symbols());
  }
  codebook.validate();
  result.codebook = std::move(codebook);
  return result;
}

}  // namespace irrm
