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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irrm/cli.hpp"
#include "irrm/ctc.hpp"
#include "irrm/errors.hpp"
#include "irrm/eval.hpp"
#include "irrm/losses.hpp"
#include "irrm/quantizer.hpp"
#include "irrm/segmenter.hpp"

namespace py = pybind11;

namespace irrm {
namespace {

Codebook single_group(const Matrix& entries) { return Codebook({entries}); }

py::dict per_dict(const PerResult& r) {
  py::dict d;
  d["rate"] = r.rate;
  d["deletions"] = r.deletions;
  d["substitutions"] = r.substitutions;
  d["insertions"] = r.insertions;
  d["reference_length"] = r.reference_length;
  return d;
}

}  // namespace
}  // namespace irrm

PYBIND11_MODULE(_irrm, m) {
  using namespace irrm;
  m.doc() = "Codebook quantization, CTC mapping, segmentation and metrics.";

  // Translators run newest first, so the base class registers first.
  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<VocabularyError>(m, "VocabularyError", base.ptr());

  m.def("phonemes", [] { return PhonemeInventory::cmu().symbols(); },
        "The 40 phoneme symbols; index 0 is silence and the CTC blank.");

  m.def(
      "quantize_km",
      [](const Vector& z, const Matrix& entries) {
        auto s = quantize_km(z, entries);
        return py::make_tuple(s.index, s.value);
      },
      py::arg("z"), py::arg("entries"),
      "Nearest codebook row: returns (index, entry).");
  m.def(
      "quantize_gs",
      [](const Vector& logits, double tau, const Vector& noise) {
        auto s = quantize_gs(logits, tau, noise);
        return py::make_tuple(s.index, s.probs);
      },
      py::arg("logits"), py::arg("tau"), py::arg("noise"),
      "Gumbel-softmax selection: returns (hard index, soft probabilities).");
  m.def("gumbel_noise", &gumbel_noise, py::arg("size"), py::arg("seed"),
        py::arg("stream"), py::arg("frame"));

  m.def("softmin_log_posteriors", &softmin_log_posteriors, py::arg("frames"),
        py::arg("entries"));
  m.def(
      "ctc_log_likelihood",
      [](const Matrix& log_probs, const std::vector<int>& labels, int blank) {
        return ctc_log_likelihood(log_probs, labels, blank);
      },
      py::arg("log_probs"), py::arg("labels"),
      py::arg("blank") = PhonemeInventory::kBlank);
  m.def(
      "ctc_min_frames",
      [](const std::vector<int>& labels) { return ctc_min_frames(labels); },
      py::arg("labels"));

  m.def(
      "window_vectors",
      [](const Matrix& values, int win) { return window_vectors(values, win); },
      py::arg("values"), py::arg("win"));
  m.def(
      "anomaly_scores",
      [](const Matrix& windows, int k) { return anomaly_scores(windows, k).scores; },
      py::arg("windows"), py::arg("k"));
  m.def(
      "detect_boundaries",
      [](const Vector& scores, int min_gap) {
        return detect_boundaries(AnomalyScores{scores}, min_gap).boundaries;
      },
      py::arg("scores"), py::arg("min_gap"));
  m.def(
      "correct_indices",
      [](const std::vector<int>& indices, const Matrix& entries, int win, int k,
         int min_gap) {
        const Codebook cb = single_group(entries);
        auto r = correct_sequence(make_quantized(cb, indices, false), cb, win, k,
                                  min_gap);
        return py::make_tuple(r.segments.boundaries, r.corrected.indices);
      },
      py::arg("indices"), py::arg("entries"), py::arg("win"), py::arg("k"),
      py::arg("min_gap"),
      "Segments a codeword index sequence and applies majority correction: "
      "returns (boundaries, corrected indices).");

  m.def(
      "contrastive_loss",
      [](const Vector& context, const Vector& target, const Matrix& distractors,
         double kappa) {
        auto r = contrastive_loss(context, target, distractors, kappa);
        return py::make_tuple(r.loss, r.grad_context, r.grad_target,
                              r.grad_distractors);
      },
      py::arg("context"), py::arg("target"), py::arg("distractors"),
      py::arg("kappa"));
  m.def(
      "rm_loss",
      [](const Vector& z, const Vector& z_hat, double beta) {
        auto r = rm_loss(z, z_hat, beta);
        return py::make_tuple(r.loss, r.grad_z, r.grad_z_hat);
      },
      py::arg("z"), py::arg("z_hat"), py::arg("beta"));

  m.def(
      "per",
      [](const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
        return per_dict(per(ref, hyp));
      },
      py::arg("ref"), py::arg("hyp"));
  m.def(
      "boundary_metrics",
      [](const std::vector<double>& ref, const std::vector<double>& hyp,
         double tolerance, double total_duration) {
        auto b = boundary_metrics(ref, hyp, tolerance, total_duration);
        py::dict d;
        d["precision"] = b.precision;
        d["recall"] = b.recall;
        d["f_score"] = b.f_score;
        d["r_value"] = b.r_value;
        d["overlap"] = b.overlap;
        d["matches"] = b.matches;
        d["ref_count"] = b.ref_count;
        d["hyp_count"] = b.hyp_count;
        return d;
      },
      py::arg("ref"), py::arg("hyp"), py::arg("tolerance"),
      py::arg("total_duration"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "Runs one irrm subcommand in-process: returns (exit code, stdout, stderr).");
}
