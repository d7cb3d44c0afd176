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

#ifndef IRRM_LOSSES_HPP_
#define IRRM_LOSSES_HPP_

#include <map>
#include <string>

#include "irrm/types.hpp"

namespace irrm {

// m.n / (|m| |n|). Zero vectors raise DomainError.
double cosine_sim(const Vector& m, const Vector& n);

struct CosineGradient {
  double value = 0.0;
  Vector grad_m;
  Vector grad_n;
};
CosineGradient cosine_sim_grad(const Vector& m, const Vector& n);

struct ContrastiveResult {
  double loss = 0.0;
  Vector grad_context;
  Vector grad_target;
  Matrix grad_distractors;  // one row per distractor
};

// -log softmax over {target} u distractors of sim(c, .) / kappa, with the
// target at position 0. distractors holds one candidate per row.
ContrastiveResult contrastive_loss(const Vector& context, const Vector& target,
                                   const Matrix& distractors, double kappa);

struct RmResult {
  double loss = 0.0;
  Vector grad_z;      // from the commitment term only
  Vector grad_z_hat;  // from the codeword term only
};

// |sg(z) - z_hat| + beta |z - sg(z_hat)|, unsquared norms. Inside a 1e-8
// ball around z == z_hat both gradients are zero.
RmResult rm_loss(const Vector& z, const Vector& z_hat, double beta);

// Same objective with the stop-gradient operands given explicitly:
// |z_sg - z_hat| + beta |z - z_hat_sg|. rm_loss(z, h, b) equals
// rm_loss_split(z, z, h, h, b).
RmResult rm_loss_split(const Vector& z, const Vector& z_sg,
                       const Vector& z_hat, const Vector& z_hat_sg,
                       double beta);

double total_loss(double l_contrastive, double l_rm, double gamma);

struct LossReport {
  double l_contrastive = 0.0;
  double l_rm = 0.0;
  double l_total = 0.0;
  std::map<std::string, Matrix> gradients;
};

}  // namespace irrm

#endif  // IRRM_LOSSES_HPP_
