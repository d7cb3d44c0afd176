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

#include <cmath>

#include "doctest.h"
#include "irrm/corpus.hpp"
#include "irrm/ctc.hpp"
#include "irrm/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace irrm {
namespace {

using testing::random_matrix;
using testing::random_vector;
using testing::rel_close;
using testing::test_rng;

PosteriorSequence posteriors(std::initializer_list<std::initializer_list<double>> rows) {
  PosteriorSequence p;
  p.probs.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.begin()->size()));
  int t = 0;
  for (auto row : rows) {
    int v = 0;
    for (double x : row) p.probs(t, v++) = x;
    ++t;
  }
  return p;
}

Matrix random_posteriors(int T, int V, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Matrix p(T, V);
  for (int t = 0; t < T; ++t) {
    for (int v = 0; v < V; ++v) p(t, v) = u(rng);
    p.row(t) /= p.row(t).sum();
  }
  return p;
}

TEST_CASE("softmin posterior examples") {
  Vector z = Vector::Zero(2);
  CHECK(softmin_posterior(z, Matrix::Ones(1, 2))(0) == 1.0);

  Matrix e(2, 2);
  e << 0, 0, 1, 0;
  Vector p = softmin_posterior(z, e);
  // 1 / (1 + e^-1) frozen from the closed form.
  CHECK(p(0) == doctest::Approx(0.7310585786300049).epsilon(1e-14));
  CHECK(p(1) == doctest::Approx(0.2689414213699951).epsilon(1e-14));
  CHECK(p(0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-14));

  Matrix ring(4, 2);
  ring << 1, 0, 0, 1, -1, 0, 0, -1;
  Vector q = softmin_posterior(z, ring);
  for (int v = 0; v < 4; ++v) CHECK(q(v) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("posterior rows are normalized and stable far from the codebook") {
  Rng rng = test_rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix entries = random_matrix(1 + trial % 12, 3, rng);
    Vector z = random_vector(3, rng);
    Vector p = softmin_posterior(z, entries);
    CHECK(std::abs(p.sum() - 1.0) <= 1e-9);
    CHECK(p.minCoeff() > 0.0);
    CHECK(p.maxCoeff() <= 1.0);
    // Translating everything keeps distances, and a frame very far away
    // must still normalize.
    Vector offset = Vector::Constant(3, 1e6);
    Matrix moved = entries.rowwise() + offset.transpose();
    Vector q = softmin_posterior(z + offset, moved);
    CHECK((q - p).cwiseAbs().maxCoeff() <= 1e-6);
    Vector far = softmin_posterior(z * 1e7, entries);
    CHECK(std::abs(far.sum() - 1.0) <= 1e-9);
    CHECK(far.allFinite());
  }
}

TEST_CASE("path likelihood examples") {
  auto p = posteriors({{0.7, 0.3}, {0.4, 0.6}});
  std::vector<int> path{0, 1};
  CHECK(path_likelihood(p, path) == doctest::Approx(0.42).epsilon(1e-15));
  std::vector<int> first{1};
  CHECK(path_likelihood(posteriors({{0.7, 0.3}}), first) == 0.3);
  auto uniform = posteriors({{0.25, 0.25, 0.25, 0.25},
                             {0.25, 0.25, 0.25, 0.25},
                             {0.25, 0.25, 0.25, 0.25}});
  std::vector<int> any{3, 0, 2};
  CHECK(path_likelihood(uniform, any) ==
        doctest::Approx(std::pow(0.25, 3)).epsilon(1e-15));
}

TEST_CASE("ctc likelihood examples") {
  std::vector<int> aa{1};
  CHECK(ctc_likelihood(posteriors({{0.2, 0.8}}), aa) ==
        doctest::Approx(0.8).epsilon(1e-14));
  // Paths AA.AA, AA.blank and blank.AA at 1/4 each.
  CHECK(ctc_likelihood(posteriors({{0.5, 0.5}, {0.5, 0.5}}), aa) ==
        doctest::Approx(0.75).epsilon(1e-14));

  std::vector<int> repeat{1, 1};
  CHECK(ctc_min_frames(repeat) == 3);
  std::vector<int> distinct{1, 2};
  CHECK(ctc_min_frames(distinct) == 2);
  CHECK_THROWS_AS(ctc_likelihood(posteriors({{0.5, 0.5}, {0.5, 0.5}}), repeat),
                  DomainError);
  std::vector<int> with_blank{0};
  CHECK_THROWS_AS(ctc_likelihood(posteriors({{0.5, 0.5}}), with_blank),
                  DomainError);
}

TEST_CASE("ctc dynamic program equals path enumeration") {
  Rng rng = test_rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int V = 2 + trial % 4;
    const int T = 1 + trial % 6;
    std::uniform_int_distribution<int> label(1, V - 1);
    std::vector<int> labels(1 + trial % 3);
    for (int& l : labels) l = label(rng);
    if (ctc_min_frames(labels) > T) continue;
    Matrix probs = random_posteriors(T, V, rng);
    PosteriorSequence p{probs};
    CHECK(std::abs(ctc_likelihood(p, labels) -
                   oracle::ctc_enumerate(probs, labels)) <= 1e-12);
  }
}

TEST_CASE("forward-backward occupancy rows sum to one") {
  Rng rng = test_rng(12);
  Matrix logp = random_posteriors(7, 4, rng).array().log().matrix();
  std::vector<int> labels{2, 2, 3};
  auto fb = ctc_forward_backward(logp, labels);
  CHECK(fb.log_likelihood == doctest::Approx(ctc_log_likelihood(logp, labels)));
  for (int t = 0; t < 7; ++t) {
    CHECK(fb.occupancy.row(t).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("codebook gradient of the ctc log-likelihood") {
  Rng rng = test_rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int V = 3 + trial % 3;
    const int T = 4 + trial % 4;
    Matrix frames = random_matrix(T, 3, rng);
    Matrix entries = random_matrix(V, 3, rng);
    std::vector<int> labels{1, V - 1};
    auto g = ctc_codebook_gradient(frames, entries, labels);
    CHECK(g.log_likelihood ==
          doctest::Approx(ctc_log_likelihood(
              softmin_log_posteriors(frames, entries), labels)));
    Matrix dir = random_matrix(V, 3, rng);
    auto f = [&](double h) {
      return ctc_log_likelihood(
          softmin_log_posteriors(frames, entries + h * dir), labels);
    };
    CHECK(rel_close((g.grad.array() * dir.array()).sum(),
                    testing::directional_fd(f), 1e-4));
  }
}

TEST_CASE("ctc targets drop silence and keep repeats") {
  PhonemeAlignment a{{{0, 2, 0}, {2, 4, 5}, {4, 5, 0}, {5, 8, 5}, {8, 9, 7}}};
  CHECK(ctc_targets(a) == std::vector<int>{5, 5, 7});
}

TEST_CASE("mapping with zero steps is a no-op") {
  auto spec = SyntheticCorpusSpec::standard(4, 3);
  spec.utterances = 3;
  Corpus corpus = generate_corpus(spec);
  std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs;
  for (auto& u : corpus) pairs.emplace_back(u.features, u.alignment);
  Codebook cb = Codebook::random(1, 40, 4, 2);
  MappingOptions options;
  options.steps = 0;
  auto mapped = map_codebook(pairs, cb, options);
  CHECK(mapped.codebook.group(0) == cb.group(0));
}

TEST_CASE("mapping ascends the likelihood on a two-symbol toy") {
  FrameSequence frames;
  frames.frames.resize(2, 2);
  frames.frames << 0.0, 0.0, 1.0, 1.0;
  PhonemeAlignment ali{{{0, 1, 0}, {1, 2, 1}}};
  std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs{{frames, ali}};
  Codebook cb = Codebook::random(1, 2, 2, 5, 0.1);
  for (bool flat : {false, true}) {
    MappingOptions options;
    options.steps = 50;
    options.learning_rate = 0.5;
    options.flat_start = flat;
    auto mapped = map_codebook(pairs, cb, options);
    REQUIRE(mapped.trace.size() == 51);
    CHECK(mapped.trace.back() >= mapped.trace.front());
  }
}

TEST_CASE("mapped codewords sit nearest their own phoneme anchor") {
  auto spec = SyntheticCorpusSpec::standard(16, 21);
  spec.utterances = 40;
  spec.seed = 4;
  Corpus corpus = generate_corpus(spec);
  std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs;
  std::vector<bool> seen(40, false);
  for (auto& u : corpus) {
    pairs.emplace_back(u.features, u.alignment);
    for (auto& s : u.alignment.segments) seen[s.phoneme] = true;
  }
  MappingOptions options;
  auto mapped = map_codebook(pairs, Codebook::random(1, 40, 16, 1, 0.1), options);
  REQUIRE(mapped.codebook.labels().has_value());
  CHECK(mapped.trace.back() > mapped.trace.front());
  const Matrix& e = mapped.codebook.group(0);
  for (int v = 0; v < 40; ++v) {
    if (!seen[v]) continue;
    Eigen::Index nearest;
    (spec.anchors.rowwise() - e.row(v)).rowwise().squaredNorm().minCoeff(&nearest);
    CHECK(nearest == v);
  }
}

TEST_CASE("flat start averages a uniform split of each utterance") {
  FrameSequence frames;
  frames.frames.resize(6, 1);
  frames.frames << 0, 1, 2, 3, 4, 5;
  // Labels SIL, 3, 3 (repeat kept), 7: collapsed to SIL, 3, 7 over 6 frames.
  PhonemeAlignment ali{{{0, 1, 0}, {1, 2, 3}, {2, 4, 3}, {4, 6, 7}}};
  std::vector<std::pair<FrameSequence, PhonemeAlignment>> pairs{{frames, ali}};
  Matrix entries = Matrix::Constant(8, 1, -9.0);
  flat_start_entries(pairs, entries);
  CHECK(entries(0, 0) == 0.5);
  CHECK(entries(3, 0) == 2.5);
  CHECK(entries(7, 0) == 4.5);
  CHECK(entries(1, 0) == -9.0);
}

}  // namespace
}  // namespace irrm
