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

#ifndef IRRM_CHECKPOINT_HPP_
#define IRRM_CHECKPOINT_HPP_

#include <cstdint>
#include <string>

#include "irrm/model.hpp"
#include "irrm/trainer.hpp"
#include "irrm/types.hpp"

namespace irrm {

/// Immutable training snapshot. SGD carries no moment buffers, so the
/// optimizer state is the step count and learning rate; the RNG state is the
/// seed and phase, since every draw comes from a stream keyed by
/// (seed, phase, step).
struct Checkpoint {
  ModelParams params;
  Codebook codebook;
  TrainConfig config;
  Phase phase = Phase::kPretrain;
  int steps_done = 0;

  bool operator==(const Checkpoint& other) const;
};

// Magic "IRCK", uint32 version, the config text, phase, step count, the
// parameter tensors in block order and the codebook. Little-endian.
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace irrm

#endif  // IRRM_CHECKPOINT_HPP_
