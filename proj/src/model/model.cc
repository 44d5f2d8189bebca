// czsda/model/model.cc

// Copyright 2026  czsda authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "czsda/model/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "czsda/base/error.h"

namespace czsda {
namespace model {

using numerics::Matrix;

std::string HeadName(Head head) {
  switch (head) {
    case Head::kTarget: return "target";
    case Head::kSource: return "source";
    case Head::kSsl: return "ssl";
  }
  return "?";
}

Head ParseHead(const std::string &name) {
  if (name == "target") return Head::kTarget;
  if (name == "source") return Head::kSource;
  if (name == "ssl") return Head::kSsl;
  throw UsageError("unknown head tag \"" + name +
                   "\" (expected target, source or ssl)");
}

const AffineLayer &ModelParams::HeadFor(Head head) const {
  switch (head) {
    case Head::kTarget: return head_target;
    case Head::kSource: return head_source;
    case Head::kSsl: return head_ssl;
  }
  throw UsageError("bad head tag");
}

AffineLayer &ModelParams::HeadFor(Head head) {
  return const_cast<AffineLayer &>(
      static_cast<const ModelParams &>(*this).HeadFor(head));
}

namespace {

AffineLayer RandomAffine(int out, int in, numerics::Rng *rng) {
  AffineLayer layer;
  layer.weight = Matrix(out, in);
  layer.bias = Matrix(out, 1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  for (double &v : layer.weight.Flat()) v = rng->Uniform(-scale, scale);
  return layer;
}

}  // namespace

ModelParams InitModel(const ModelConfig &config, numerics::Rng *rng) {
  if (config.feature_dim < 1 || config.encoder_layers < 1 ||
      config.hidden_width < 1 || config.context_radius < 0) {
    throw ConfigError("bad model dimensions");
  }
  if (config.vocab_target < 2 || config.vocab_source < 2) {
    throw ConfigError("each vocabulary needs the blank plus one token");
  }
  if (config.ssl_clusters < 1) throw ConfigError("ssl_clusters must be >= 1");

  ModelParams params;
  params.feature_dim = config.feature_dim;
  params.context_radius = config.context_radius;
  int in = params.StackedDim();
  for (int i = 0; i < config.encoder_layers; ++i) {
    params.encoder.push_back(RandomAffine(config.hidden_width, in, rng));
    in = config.hidden_width;
  }
  params.head_target = RandomAffine(config.vocab_target, in, rng);
  params.head_source = RandomAffine(config.vocab_source, in, rng);
  params.head_ssl = RandomAffine(config.ssl_clusters, in, rng);
  return params;
}

ModelParams ZerosLike(const ModelParams &params) {
  ModelParams zeros = params;
  ForEachParam(&zeros, [](const std::string &, Matrix *m) { m->Fill(0.0); });
  return zeros;
}

void ForEachParam(ModelParams *params,
                  const std::function<void(const std::string &, Matrix *)> &fn) {
  for (std::size_t i = 0; i < params->encoder.size(); ++i) {
    const std::string prefix = "encoder" + std::to_string(i);
    fn(prefix + ".weight", &params->encoder[i].weight);
    fn(prefix + ".bias", &params->encoder[i].bias);
  }
  fn("head_target.weight", &params->head_target.weight);
  fn("head_target.bias", &params->head_target.bias);
  fn("head_source.weight", &params->head_source.weight);
  fn("head_source.bias", &params->head_source.bias);
  fn("head_ssl.weight", &params->head_ssl.weight);
  fn("head_ssl.bias", &params->head_ssl.bias);
}

void ForEachParam(const ModelParams &params,
                  const std::function<void(const std::string &,
                                           const Matrix &)> &fn) {
  ForEachParam(const_cast<ModelParams *>(&params),
               [&fn](const std::string &name, Matrix *m) { fn(name, *m); });
}

namespace {

std::vector<const Matrix *> CollectTensors(const ModelParams &params) {
  std::vector<const Matrix *> tensors;
  ForEachParam(params, [&tensors](const std::string &, const Matrix &m) {
    tensors.push_back(&m);
  });
  return tensors;
}

}  // namespace

bool SameShapes(const ModelParams &a, const ModelParams &b) {
  if (a.feature_dim != b.feature_dim || a.context_radius != b.context_radius ||
      a.encoder.size() != b.encoder.size()) {
    return false;
  }
  const auto ta = CollectTensors(a);
  const auto tb = CollectTensors(b);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!ta[i]->SameShape(*tb[i])) return false;
  }
  return true;
}

bool BitIdentical(const ModelParams &a, const ModelParams &b) {
  if (!SameShapes(a, b)) return false;
  const auto ta = CollectTensors(a);
  const auto tb = CollectTensors(b);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (std::memcmp(ta[i]->Data(), tb[i]->Data(),
                    ta[i]->Size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

LayerActivations ForwardTrace::Activations() const {
  LayerActivations acts;
  acts.layers = post;
  for (std::size_t i = 0; i < post.size(); ++i) {
    acts.labels.push_back("encoder" + std::to_string(i));
  }
  return acts;
}

namespace {

// Rows are frames: out = in · Wᵀ + bᵀ broadcast over rows.
Matrix AffineRows(const Matrix &in, const AffineLayer &layer) {
  Matrix out = numerics::MatMulTransB(in, layer.weight);
  for (int t = 0; t < out.Rows(); ++t) {
    double *row = out.RowData(t);
    for (int j = 0; j < out.Cols(); ++j) row[j] += layer.bias(j, 0);
  }
  return out;
}

Matrix StackContext(const Matrix &frames, int radius, int feature_dim) {
  if (frames.Cols() != feature_dim) {
    throw ShapeError("input has " + std::to_string(frames.Cols()) +
                     " features, model expects " + std::to_string(feature_dim));
  }
  const int window = 2 * radius + 1;
  Matrix stacked(frames.Rows(), feature_dim * window);
  for (int t = 0; t < frames.Rows(); ++t) {
    double *out = stacked.RowData(t);
    for (int w = -radius; w <= radius; ++w) {
      const int src = std::clamp(t + w, 0, frames.Rows() - 1);
      const double *row = frames.RowData(src);
      std::copy(row, row + feature_dim, out + (w + radius) * feature_dim);
    }
  }
  return stacked;
}

}  // namespace

ForwardTrace Forward(const ModelParams &params, const Matrix &frames,
                     Head head) {
  if (frames.Rows() < 1) throw ShapeError("forward needs at least one frame");
  ForwardTrace trace;
  trace.head = head;
  trace.stacked = StackContext(frames, params.context_radius, params.feature_dim);

  const Matrix *input = &trace.stacked;
  for (const AffineLayer &layer : params.encoder) {
    Matrix pre = AffineRows(*input, layer);
    Matrix post = pre;
    for (double &v : post.Flat()) v = std::max(0.0, v);
    trace.pre.push_back(std::move(pre));
    trace.post.push_back(std::move(post));
    input = &trace.post.back();
  }
  trace.logits = AffineRows(*input, params.HeadFor(head));
  return trace;
}

void Backward(const ModelParams &params, const ForwardTrace &trace,
              const Matrix &dlogits, ModelParams *grads) {
  const Matrix &head_input =
      trace.post.empty() ? trace.stacked : trace.post.back();
  numerics::CheckSameShape(dlogits, trace.logits, "backward dlogits");

  AffineLayer *head_grad = &grads->HeadFor(trace.head);
  AddInPlace(&head_grad->weight, numerics::MatTransMul(dlogits, head_input));
  AddInPlace(&head_grad->bias, numerics::ColSums(dlogits));

  Matrix dpost = numerics::MatMul(dlogits, params.HeadFor(trace.head).weight);
  for (int i = static_cast<int>(params.encoder.size()) - 1; i >= 0; --i) {
    // ReLU backward: zero where the pre-activation was non-positive.
    Matrix dpre = std::move(dpost);
    const Matrix &pre = trace.pre[i];
    for (int t = 0; t < dpre.Rows(); ++t) {
      double *drow = dpre.RowData(t);
      const double *prow = pre.RowData(t);
      for (int j = 0; j < dpre.Cols(); ++j) {
        if (prow[j] <= 0.0) drow[j] = 0.0;
      }
    }
    const Matrix &layer_input = i == 0 ? trace.stacked : trace.post[i - 1];
    AddInPlace(&grads->encoder[i].weight,
               numerics::MatTransMul(dpre, layer_input));
    AddInPlace(&grads->encoder[i].bias, numerics::ColSums(dpre));
    if (i > 0) dpost = numerics::MatMul(dpre, params.encoder[i].weight);
  }
}

void ReinitHead(ModelParams *params, Head head, numerics::Rng *rng,
                double scale) {
  AffineLayer &layer = params->HeadFor(head);
  for (double &v : layer.weight.Flat()) v = rng->Uniform(-scale, scale);
  layer.bias.Fill(0.0);
}

}  // namespace model
}  // namespace czsda
