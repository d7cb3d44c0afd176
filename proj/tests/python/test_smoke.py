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

import itertools
import math

import numpy as np
import pytest

import irrm


def test_inventory():
    symbols = irrm.phonemes()
    assert len(symbols) == 40
    assert symbols[0] == "SIL"


def test_quantize_km_picks_nearest_row():
    entries = np.array([[0.0, 0.0], [1.0, 1.0], [3.0, 0.0]])
    index, value = irrm.quantize_km(np.array([0.9, 0.8]), entries)
    assert index == 1
    np.testing.assert_array_equal(value, entries[1])


def test_quantize_gs_sums_to_one():
    logits = np.array([0.3, -1.0, 2.0, 0.5])
    index, probs = irrm.quantize_gs(logits, 0.7, np.zeros(4))
    assert index == 2
    assert abs(probs.sum() - 1.0) < 1e-12
    with pytest.raises(irrm.DomainError):
        irrm.quantize_gs(logits, 0.0, np.zeros(4))


def test_ctc_matches_enumeration():
    rng = np.random.default_rng(3)
    probs = rng.uniform(0.1, 1.0, size=(4, 3))
    probs /= probs.sum(axis=1, keepdims=True)
    labels = [1, 2]

    def collapse(path):
        merged = [k for k, _ in itertools.groupby(path)]
        return [v for v in merged if v != 0]

    total = sum(
        math.prod(probs[t, v] for t, v in enumerate(path))
        for path in itertools.product(range(3), repeat=4)
        if collapse(path) == labels
    )
    got = math.exp(irrm.ctc_log_likelihood(np.log(probs), labels))
    assert abs(got - total) < 1e-12
    assert irrm.ctc_min_frames([1, 1]) == 3


def test_segmentation_recovers_clean_blocks():
    rng = np.random.default_rng(0)
    entries = rng.normal(size=(40, 8))
    indices = [5] * 8 + [17] * 9 + [30] * 8
    boundaries, corrected = irrm.correct_indices(indices, entries, 4, 5, 3)
    assert boundaries == [8, 17]
    assert corrected == indices


def test_anomaly_scores_and_peaks():
    windows = irrm.window_vectors(np.array([[0.0], [0.0], [5.0], [5.0]]), 2)
    assert windows.shape == (4, 2)
    scores = irrm.anomaly_scores(windows, 1)
    assert scores.shape == (4,)
    assert irrm.detect_boundaries(np.array([0.0, 1.0, 0.0, 5.0, 0.0]), 3) == [3]


def test_losses():
    loss, grad_z, grad_z_hat = irrm.rm_loss(np.array([3.0, 4.0]), np.zeros(2), 2.0)
    assert loss == pytest.approx(15.0)
    np.testing.assert_allclose(grad_z, [1.2, 1.6])
    np.testing.assert_allclose(grad_z_hat, [-0.6, -0.8])
    c = np.array([1.0, 0.0])
    loss, *_ = irrm.contrastive_loss(c, c, np.array([[0.0, 1.0]]), 0.1)
    assert loss > 0.0


def test_metrics():
    assert irrm.per(["AA", "B"], ["AA", "B"])["rate"] == 0.0
    assert irrm.per(["AA", "B", "T", "D"], ["AA", "T", "T", "D"])["substitutions"] == 1
    with pytest.raises(irrm.VocabularyError):
        irrm.per(["AA"], ["QQ"])
    m = irrm.boundary_metrics([0.5, 1.0], [0.5, 1.0], 0.02, 2.0)
    assert m["f_score"] == 1.0 and m["r_value"] == 1.0


def test_cli_in_process(tmp_path):
    ref = tmp_path / "ref.txt"
    ref.write_text("AA B T\n")
    code, out, _ = irrm.run_cli(["eval-per", "--ref", str(ref), "--hyp", str(ref)])
    assert code == 0
    assert out.startswith("PER 0.0")
    code, _, _ = irrm.run_cli(["--no-such-flag"])
    assert code == 2
