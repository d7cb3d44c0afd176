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
#include "irrm/errors.hpp"
#include "irrm/trainer.hpp"
#include "test_util.hpp"

namespace irrm {
namespace {

using testing::directional_fd;
using testing::random_matrix;
using testing::rel_close;
using testing::test_rng;

TrainConfig small_config() {
  TrainConfig c;
  c.hidden_dim = 8;
  c.embed_dim = 6;
  c.context_taps = 2;
  c.steps = 40;
  c.map_steps = 20;
  c.map_utterances = 4;
  c.mask_prob = 0.2;
  return c;
}

Corpus small_corpus(int utterances, std::uint64_t seed, int input_dim = 5) {
  auto spec = SyntheticCorpusSpec::standard(input_dim, 17);
  spec.utterances = utterances;
  spec.seed = seed;
  spec.phoneme_pool = {3, 9, 20, 31};
  return generate_corpus(spec);
}

Codebook labeled_codebook(int dim, std::uint64_t seed) {
  Codebook cb = Codebook::random(1, 40, dim, seed);
  cb.set_labels(PhonemeInventory::cmu().symbols());
  return cb;
}

TEST_CASE("mask covers spans and substitutes the mask embedding") {
  Rng rng = test_rng(50);
  Matrix seq = random_matrix(30, 4, rng);
  Vector emb = Vector::Constant(4, 7.0);
  auto m = apply_mask(seq, 0.1, 3, 5, emb);
  CHECK_FALSE(m.positions.empty());
  REQUIRE(m.is_masked.size() == 30);
  for (int t = 0; t < 30; ++t) {
    if (m.is_masked[t]) {
      CHECK(m.masked.row(t) == emb.transpose());
    } else {
      CHECK(m.masked.row(t) == seq.row(t));
    }
  }
  auto again = apply_mask(seq, 0.1, 3, 5, emb);
  CHECK(again.positions == m.positions);
  auto other = apply_mask(seq, 0.1, 3, 5, emb, 1);
  CHECK(other.positions != m.positions);

  auto all = apply_mask(seq, 1.0 - 1e-12, 1, 2, emb);
  CHECK(all.positions.size() == 30);

  Matrix one = random_matrix(1, 4, rng);
  CHECK(apply_mask(one, 1e-6, 1, 0, emb).positions == std::vector<int>{0});

  CHECK_THROWS_AS(apply_mask(seq, 0.0, 1, 0, emb), DomainError);
  CHECK_THROWS_AS(apply_mask(seq, 0.5, 0, 0, emb), DomainError);
}

TEST_CASE("masked fraction matches 1 - (1 - p)^span") {
  const double p = 0.065;
  const int span = 3;
  Matrix seq = Matrix::Zero(400, 1);
  Vector emb = Vector::Ones(1);
  long hits = 0, n = 0;
  for (int draw = 0; draw < 200; ++draw) {
    auto m = apply_mask(seq, p, span, 9, emb, draw);
    // Frames 4 apart share no span start, so these counts are independent.
    for (int t = span; t < 400; t += span + 1) {
      hits += m.is_masked[t];
      ++n;
    }
  }
  const double q = 1.0 - std::pow(1.0 - p, span);
  const double sigma = std::sqrt(q * (1.0 - q) / n);
  CHECK(std::abs(static_cast<double>(hits) / n - q) <= 3.0 * sigma);
}

void check_plan_gradient(QuantizerScheme scheme, std::uint64_t seed) {
  TrainConfig c = small_config();
  c.scheme = scheme;
  c.num_negatives = 4;
  c.mask_prob = 0.3;
  Corpus corpus = small_corpus(1, seed);
  const auto& x = corpus[0].features;
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, seed);
  Codebook cb = labeled_codebook(c.embed_dim, seed);
  auto step = train_step(params, cb, x, c, Phase::kPretrain, 3, 10);
  auto base = evaluate_plan(params, cb, x, c, step.plan);
  CHECK(base.report.l_total == step.report.l_total);
  CHECK(base.report.l_total ==
        doctest::Approx(base.report.l_contrastive + c.gamma * base.report.l_rm)
            .epsilon(1e-12));

  Rng rng = test_rng(seed);
  auto dir = ModelParams::zeros_like(params);
  std::normal_distribution<double> normal;
  for (auto& b : dir.blocks()) {
    for (Eigen::Index i = 0; i < b.size; ++i) b.data[i] = normal(rng);
  }
  Matrix cdir = random_matrix(40, c.embed_dim, rng);
  auto f = [&](double h) {
    auto p = params;
    p.axpy(h, dir);
    Codebook moved = cb;
    moved.group(0) += h * cdir;
    return evaluate_plan(p, moved, x, c, step.plan).report.l_total;
  };
  double analytic = (base.codebook_grad.array() * cdir.array()).sum();
  auto gb = base.grad.blocks();
  auto db = dir.blocks();
  for (std::size_t i = 0; i < gb.size(); ++i) {
    for (Eigen::Index j = 0; j < gb[i].size; ++j) {
      analytic += gb[i].data[j] * db[i].data[j];
    }
  }
  CHECK(rel_close(analytic, directional_fd(f, 1e-5), 1e-3));
  CHECK(base.report.gradients.count("codebook") == 1);
}

TEST_CASE("step gradient matches finite differences of the surrogate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    check_plan_gradient(QuantizerScheme::kKMeans, seed);
    check_plan_gradient(QuantizerScheme::kGumbel, seed);
  }
}

TEST_CASE("learning rate zero leaves parameters unchanged") {
  TrainConfig c = small_config();
  c.learning_rate = 0.0;
  c.steps = 12;
  Corpus corpus = small_corpus(3, 1);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 1);
  Codebook cb = labeled_codebook(c.embed_dim, 1);
  auto r = pretrain(corpus, params, cb, c);
  CHECK(r.params == params);
  CHECK(r.codebook == cb);
  CHECK(r.mapped_at_step == -1);
  REQUIRE(r.trace.size() == 12);
  for (const auto& rec : r.trace) {
    auto again = train_step(params, cb, corpus[rec.utterance].features, c,
                            Phase::kPretrain, rec.step, c.steps);
    CHECK(again.report.l_total == rec.l_total);
  }
}

TEST_CASE("unlabeled codebooks are mapped once") {
  TrainConfig c = small_config();
  c.steps = 10;
  c.warmup_fraction = 0.3;
  Corpus corpus = small_corpus(4, 2);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 2);
  auto r = pretrain(corpus, params, Codebook::random(1, 40, c.embed_dim, 2), c);
  CHECK(r.mapped_at_step == 3);
  CHECK(r.codebook.labels().has_value());
  CHECK(r.mapping_trace.size() == static_cast<std::size_t>(c.map_steps) + 1);
}

TEST_CASE("training is reproducible and thread-count independent") {
  TrainConfig c = small_config();
  Corpus corpus = small_corpus(5, 3);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 3);
  Codebook cb = Codebook::random(1, 40, c.embed_dim, 3);
  auto a = pretrain(corpus, params, cb, c);
  c.threads = 3;
  auto b = pretrain(corpus, params, cb, c);
  CHECK(a.params == b.params);
  CHECK(a.codebook == b.codebook);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].l_total == b.trace[i].l_total);
  }
  CHECK(corpus_per(a.params, a.codebook, corpus, c).rate ==
        corpus_per(b.params, b.codebook, corpus, c).rate);
}

TEST_CASE("contrastive loss falls on a separable noiseless toy") {
  auto spec = SyntheticCorpusSpec::standard(6, 4);
  spec.noise_scale = 0.0;
  spec.phoneme_pool = {5, 14, 27};
  spec.utterances = 20;
  Corpus corpus = generate_corpus(spec);
  TrainConfig c;
  c.steps = 500;
  c.cluster_correction = false;
  auto params = ModelParams::init(6, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 4);
  auto r = pretrain(corpus, params, Codebook::random(1, 40, c.embed_dim, 4, 0.1), c);
  const int epoch = static_cast<int>(corpus.size());
  auto mean = [&](int from) {
    double s = 0.0;
    for (int i = from; i < from + epoch; ++i) s += r.trace[i].l_contrastive;
    return s / epoch;
  };
  CHECK(mean(c.steps - epoch) < mean(0));
}

TEST_CASE("adapting on the source with lr 0 gives zero drift") {
  TrainConfig c = small_config();
  c.learning_rate = 0.0;
  Corpus corpus = small_corpus(3, 5);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 5);
  Codebook cb = labeled_codebook(c.embed_dim, 5);
  auto r = adapt(corpus, params, cb, c);
  CHECK(r.drift == Matrix::Zero(40, c.embed_dim));
}

TEST_CASE("adaptation drift is reproducible") {
  TrainConfig c = small_config();
  Corpus corpus = small_corpus(3, 6);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 6);
  Codebook cb = labeled_codebook(c.embed_dim, 6);
  auto a = adapt(corpus, params, cb, c);
  auto b = adapt(corpus, params, cb, c);
  CHECK(a.drift == b.drift);
  CHECK(a.drift == a.codebook.group(0) - cb.group(0));
  CHECK(a.mapped_at_step == -1);
}

TEST_CASE("divergence raises a training error with the trace") {
  TrainConfig c = small_config();
  c.learning_rate = 1e306;
  Corpus corpus = small_corpus(2, 7);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 7);
  Codebook cb = labeled_codebook(c.embed_dim, 7);
  try {
    pretrain(corpus, params, cb, c);
    FAIL("expected a training error");
  } catch (const TrainingError& e) {
    CHECK_FALSE(e.trace().empty());
  }
}

TEST_CASE("recognition collapses runs and drops silence") {
  TrainConfig c = small_config();
  c.cluster_correction = false;
  Corpus corpus = small_corpus(2, 8);
  auto params = ModelParams::init(5, c.hidden_dim, c.embed_dim, 40,
                                  c.context_taps, 8);
  Codebook cb = labeled_codebook(c.embed_dim, 8);
  const auto& x = corpus[0].features;
  auto q = infer_quantized(params, cb, x, c, false);
  std::vector<int> expected;
  for (int t = 0; t < q.length(); ++t) {
    const int v = q.index(t);
    if ((t == 0 || v != q.index(t - 1)) && v != PhonemeInventory::kBlank) {
      expected.push_back(v);
    }
  }
  CHECK(recognize(params, cb, x, c) == expected);
  CHECK(mean_commit_distance(params, cb, corpus, c) > 0.0);
}

}  // namespace
}  // namespace irrm
