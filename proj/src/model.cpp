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

#include "irrm/model.hpp"

#include <algorithm>
#include <cmath>

#include "irrm/errors.hpp"
#include "irrm/random.hpp"

namespace irrm {
namespace {

constexpr double kMinNorm = 1e-12;

Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sd) {
  std::normal_distribution<double> normal(0.0, sd);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

}  // namespace

ModelParams ModelParams::init(int input_dim, int hidden_dim, int embed_dim,
                              int entries, int taps, std::uint64_t seed) {
  if (input_dim < 1 || hidden_dim < 1 || embed_dim < 1 || entries < 1 ||
      taps < 1) {
    throw ValidationError("model dimensions must be positive");
  }
  Rng rng = keyed_stream(seed, StreamTag::kModelInit);
  ModelParams p;
  p.enc_w1 = gaussian(rng, hidden_dim, input_dim, 1.0 / std::sqrt(input_dim));
  p.enc_b1 = Vector::Zero(hidden_dim);
  p.enc_w2 = gaussian(rng, embed_dim, hidden_dim, 1.0 / std::sqrt(hidden_dim));
  p.enc_b2 = Vector::Zero(embed_dim);
  p.gs_projection =
      gaussian(rng, entries, embed_dim, 1.0 / std::sqrt(embed_dim));
  p.gs_bias = Vector::Zero(entries);
  for (int j = 0; j < taps; ++j) {
    // Start near "copy the previous frame" so context is informative early.
    Matrix tap = gaussian(rng, embed_dim, embed_dim,
                          0.1 / std::sqrt(static_cast<double>(embed_dim)));
    if (j == 1 || taps == 1) tap += Matrix::Identity(embed_dim, embed_dim);
    p.context_taps.push_back(std::move(tap));
  }
  p.context_bias = Vector::Zero(embed_dim);
  p.mask_embedding = gaussian(rng, embed_dim, 1, 1.0);
  return p;
}

ModelParams ModelParams::zeros_like(const ModelParams& o) {
  ModelParams p;
  p.enc_w1 = Matrix::Zero(o.enc_w1.rows(), o.enc_w1.cols());
  p.enc_b1 = Vector::Zero(o.enc_b1.size());
  p.enc_w2 = Matrix::Zero(o.enc_w2.rows(), o.enc_w2.cols());
  p.enc_b2 = Vector::Zero(o.enc_b2.size());
  p.gs_projection =
      Matrix::Zero(o.gs_projection.rows(), o.gs_projection.cols());
  p.gs_bias = Vector::Zero(o.gs_bias.size());
  for (const auto& t : o.context_taps) {
    p.context_taps.push_back(Matrix::Zero(t.rows(), t.cols()));
  }
  p.context_bias = Vector::Zero(o.context_bias.size());
  p.mask_embedding = Vector::Zero(o.mask_embedding.size());
  return p;
}

std::vector<ModelParams::Block> ModelParams::blocks() {
  std::vector<Block> out = {
      {"enc_w1", enc_w1.data(), enc_w1.size()},
      {"enc_b1", enc_b1.data(), enc_b1.size()},
      {"enc_w2", enc_w2.data(), enc_w2.size()},
      {"enc_b2", enc_b2.data(), enc_b2.size()},
      {"gs_projection", gs_projection.data(), gs_projection.size()},
      {"gs_bias", gs_bias.data(), gs_bias.size()},
  };
  for (std::size_t j = 0; j < context_taps.size(); ++j) {
    out.push_back({"context_tap" + std::to_string(j), context_taps[j].data(),
                   context_taps[j].size()});
  }
  out.push_back({"context_bias", context_bias.data(), context_bias.size()});
  out.push_back(
      {"mask_embedding", mask_embedding.data(), mask_embedding.size()});
  return out;
}

std::vector<const double*> ModelParams::block_data() const {
  auto blocks = const_cast<ModelParams*>(this)->blocks();
  std::vector<const double*> out;
  for (const auto& b : blocks) out.push_back(b.data);
  return out;
}

std::vector<std::string> ModelParams::block_names() const {
  auto blocks = const_cast<ModelParams*>(this)->blocks();
  std::vector<std::string> out;
  for (const auto& b : blocks) out.push_back(b.name);
  return out;
}

void ModelParams::axpy(double alpha, const ModelParams& other) {
  enc_w1 += alpha * other.enc_w1;
  enc_b1 += alpha * other.enc_b1;
  enc_w2 += alpha * other.enc_w2;
  enc_b2 += alpha * other.enc_b2;
  gs_projection += alpha * other.gs_projection;
  gs_bias += alpha * other.gs_bias;
  for (std::size_t j = 0; j < context_taps.size(); ++j) {
    context_taps[j] += alpha * other.context_taps.at(j);
  }
  context_bias += alpha * other.context_bias;
  mask_embedding += alpha * other.mask_embedding;
}

bool ModelParams::all_finite() const {
  bool ok = enc_w1.allFinite() && enc_b1.allFinite() && enc_w2.allFinite() &&
            enc_b2.allFinite() && gs_projection.allFinite() &&
            gs_bias.allFinite() && context_bias.allFinite() &&
            mask_embedding.allFinite();
  for (const auto& t : context_taps) ok = ok && t.allFinite();
  return ok;
}

bool ModelParams::operator==(const ModelParams& o) const {
  auto a = const_cast<ModelParams*>(this)->blocks();
  auto b = const_cast<ModelParams&>(o).blocks();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size != b[i].size) return false;
    for (Eigen::Index k = 0; k < a[i].size; ++k) {
      if (a[i].data[k] != b[i].data[k]) return false;
    }
  }
  return true;
}

EncoderCache encode(const ModelParams& p, const Matrix& inputs) {
  if (inputs.cols() != p.enc_w1.cols()) {
    throw ValidationError("input dimension does not match the encoder");
  }
  EncoderCache cache;
  cache.hidden =
      ((inputs * p.enc_w1.transpose()).rowwise() + p.enc_b1.transpose())
          .array()
          .tanh()
          .matrix();
  cache.pre = (cache.hidden * p.enc_w2.transpose()).rowwise() +
              p.enc_b2.transpose();
  const double radius = std::sqrt(static_cast<double>(cache.pre.cols()));
  cache.z.resize(cache.pre.rows(), cache.pre.cols());
  for (Eigen::Index t = 0; t < cache.pre.rows(); ++t) {
    const double n = std::max(cache.pre.row(t).norm(), kMinNorm);
    cache.z.row(t) = cache.pre.row(t) * (radius / n);
  }
  return cache;
}

void encoder_backward(const ModelParams& p, const Matrix& inputs,
                      const EncoderCache& cache, const Matrix& grad_z,
                      ModelParams& grads) {
  const double radius = std::sqrt(static_cast<double>(cache.pre.cols()));
  Matrix grad_pre_out(grad_z.rows(), grad_z.cols());
  for (Eigen::Index t = 0; t < grad_z.rows(); ++t) {
    const double n = std::max(cache.pre.row(t).norm(), kMinNorm);
    const auto u = cache.pre.row(t) / n;
    grad_pre_out.row(t) =
        (radius / n) * (grad_z.row(t) - u * u.dot(grad_z.row(t)));
  }
  grads.enc_w2 += grad_pre_out.transpose() * cache.hidden;
  grads.enc_b2 += grad_pre_out.colwise().sum().transpose();
  Matrix grad_hidden = grad_pre_out * p.enc_w2;
  Matrix grad_pre =
      (grad_hidden.array() * (1.0 - cache.hidden.array().square())).matrix();
  grads.enc_w1 += grad_pre.transpose() * inputs;
  grads.enc_b1 += grad_pre.colwise().sum().transpose();
}

Matrix context_forward(const ModelParams& p, const Matrix& inputs) {
  const Eigen::Index T = inputs.rows();
  Matrix c = Matrix::Zero(T, p.context_bias.size());
  c.rowwise() += p.context_bias.transpose();
  for (std::size_t j = 0; j < p.context_taps.size(); ++j) {
    const Eigen::Index lag = static_cast<Eigen::Index>(j);
    if (lag >= T) break;
    c.bottomRows(T - lag) +=
        inputs.topRows(T - lag) * p.context_taps[j].transpose();
  }
  return c;
}

Matrix context_backward(const ModelParams& p, const Matrix& inputs,
                        const Matrix& grad_context, ModelParams& grads) {
  const Eigen::Index T = inputs.rows();
  Matrix grad_inputs = Matrix::Zero(inputs.rows(), inputs.cols());
  grads.context_bias += grad_context.colwise().sum().transpose();
  for (std::size_t j = 0; j < p.context_taps.size(); ++j) {
    const Eigen::Index lag = static_cast<Eigen::Index>(j);
    if (lag >= T) break;
    grads.context_taps[j] +=
        grad_context.bottomRows(T - lag).transpose() * inputs.topRows(T - lag);
    grad_inputs.topRows(T - lag) +=
        grad_context.bottomRows(T - lag) * p.context_taps[j];
  }
  return grad_inputs;
}

}  // namespace irrm
