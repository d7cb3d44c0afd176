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

#include "irrm/losses.hpp"

#include <cmath>

#include "irrm/errors.hpp"

namespace irrm {
namespace {
constexpr double kRmSingularRadius = 1e-8;
}

double cosine_sim(const Vector& m, const Vector& n) {
  if (m.size() != n.size()) throw ValidationError("vector sizes differ");
  const double nm = m.norm();
  const double nn = n.norm();
  if (nm == 0.0 || nn == 0.0) {
    throw DomainError("cosine similarity of a zero vector");
  }
  return m.dot(n) / (nm * nn);
}

CosineGradient cosine_sim_grad(const Vector& m, const Vector& n) {
  CosineGradient out;
  out.value = cosine_sim(m, n);
  const double nm = m.norm();
  const double nn = n.norm();
  out.grad_m = n / (nm * nn) - out.value * m / (nm * nm);
  out.grad_n = m / (nm * nn) - out.value * n / (nn * nn);
  return out;
}

ContrastiveResult contrastive_loss(const Vector& context, const Vector& target,
                                   const Matrix& distractors, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const Eigen::Index n = distractors.rows();
  if (n > 0 && distractors.cols() != target.size()) {
    throw ValidationError("distractor dimension differs from target");
  }
  std::vector<CosineGradient> sims;
  sims.reserve(n + 1);
  sims.push_back(cosine_sim_grad(context, target));
  for (Eigen::Index i = 0; i < n; ++i) {
    sims.push_back(cosine_sim_grad(context, distractors.row(i).transpose()));
  }
  Vector logits(n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) logits(i) = sims[i].value / kappa;
  const double top = logits.maxCoeff();
  Vector w = (logits.array() - top).exp().matrix();
  const double norm = w.sum();
  w /= norm;

  ContrastiveResult out;
  out.loss = -(logits(0) - top - std::log(norm));
  // d loss / d logit_i = softmax_i - [i == 0].
  Vector dlogit = w;
  dlogit(0) -= 1.0;
  out.grad_context = Vector::Zero(context.size());
  for (Eigen::Index i = 0; i <= n; ++i) {
    out.grad_context += (dlogit(i) / kappa) * sims[i].grad_m;
  }
  out.grad_target = (dlogit(0) / kappa) * sims[0].grad_n;
  out.grad_distractors.resize(n, target.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.grad_distractors.row(i) =
        ((dlogit(i + 1) / kappa) * sims[i + 1].grad_n).transpose();
  }
  return out;
}

RmResult rm_loss(const Vector& z, const Vector& z_hat, double beta) {
  return rm_loss_split(z, z, z_hat, z_hat, beta);
}

RmResult rm_loss_split(const Vector& z, const Vector& z_sg,
                       const Vector& z_hat, const Vector& z_hat_sg,
                       double beta) {
  if (z.size() != z_hat.size() || z_sg.size() != z.size() ||
      z_hat_sg.size() != z.size()) {
    throw ValidationError("vector sizes differ");
  }
  RmResult out;
  out.grad_z = Vector::Zero(z.size());
  out.grad_z_hat = Vector::Zero(z.size());
  const Vector codeword_diff = z_hat - z_sg;
  const Vector commit_diff = z - z_hat_sg;
  const double codeword_dist = codeword_diff.norm();
  const double commit_dist = commit_diff.norm();
  out.loss = codeword_dist + beta * commit_dist;
  if (codeword_dist >= kRmSingularRadius) {
    out.grad_z_hat = codeword_diff / codeword_dist;
  }
  if (commit_dist >= kRmSingularRadius) {
    out.grad_z = beta * commit_diff / commit_dist;
  }
  return out;
}

double total_loss(double l_contrastive, double l_rm, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("gamma must be non-negative");
  return l_contrastive + gamma * l_rm;
}

}  // namespace irrm
