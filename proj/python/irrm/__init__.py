# Copyright 2026 The IRRM Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ============================================================================

"""Python bindings for the irrm C++ library."""

from irrm._irrm import (
    DomainError,
    Error,
    ValidationError,
    VocabularyError,
    anomaly_scores,
    boundary_metrics,
    contrastive_loss,
    correct_indices,
    ctc_log_likelihood,
    ctc_min_frames,
    detect_boundaries,
    gumbel_noise,
    per,
    phonemes,
    quantize_gs,
    quantize_km,
    rm_loss,
    run_cli,
    softmin_log_posteriors,
    window_vectors,
)

__all__ = [
    "DomainError",
    "Error",
    "ValidationError",
    "VocabularyError",
    "anomaly_scores",
    "boundary_metrics",
    "contrastive_loss",
    "correct_indices",
    "ctc_log_likelihood",
    "ctc_min_frames",
    "detect_boundaries",
    "gumbel_noise",
    "per",
    "phonemes",
    "quantize_gs",
    "quantize_km",
    "rm_loss",
    "run_cli",
    "softmin_log_posteriors",
    "window_vectors",
]
