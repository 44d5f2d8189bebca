// czsda/model/model.h

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

#ifndef CZSDA_MODEL_MODEL_H_
#define CZSDA_MODEL_MODEL_H_

#include <functional>
#include <string>
#include <vector>

#include "czsda/ctc/ctc.h"
#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"

namespace czsda {
namespace model {

// Classifier branch selector. The encoder is shared; each branch is one
// affine layer on top of the final encoder width.
enum class Head { kTarget, kSource, kSsl };

std::string HeadName(Head head);
Head ParseHead(const std::string &name);

struct AffineLayer {
  numerics::Matrix weight;  // out×in
  numerics::Matrix bias;    // out×1

  int In() const { return weight.Cols(); }
  int Out() const { return weight.Rows(); }
};

struct ModelConfig {
  int feature_dim = 16;
  int context_radius = 2;   // frames stacked on each side of the center
  int encoder_layers = 3;
  int hidden_width = 64;
  int vocab_target = 13;    // incl. blank
  int vocab_source = 13;    // incl. blank; equals vocab_target in translit modes
  int ssl_clusters = 32;
};

// Shared MLP encoder over context-stacked frames plus three affine
// heads. ReLU follows every encoder layer; heads are linear.
struct ModelParams {
  int feature_dim = 0;
  int context_radius = 0;
  std::vector<AffineLayer> encoder;
  AffineLayer head_target;
  AffineLayer head_source;
  AffineLayer head_ssl;

  int StackedDim() const { return feature_dim * (2 * context_radius + 1); }
  int HiddenWidth() const {
    return encoder.empty() ? StackedDim() : encoder.back().Out();
  }
  const AffineLayer &HeadFor(Head head) const;
  AffineLayer &HeadFor(Head head);
};

// Uniform(-s, s) weights with s = 1/sqrt(fan-in), zero biases.
ModelParams InitModel(const ModelConfig &config, numerics::Rng *rng);
// Same structure, all entries zero; gradient accumulators use this.
ModelParams ZerosLike(const ModelParams &params);

// Visits every tensor in a fixed documented order: encoder weights and
// biases by depth, then head_target, head_source, head_ssl. Checkpoint
// layout, Adam slots and the EMA update all rely on this order.
void ForEachParam(ModelParams *params,
                  const std::function<void(const std::string &,
                                           numerics::Matrix *)> &fn);
void ForEachParam(const ModelParams &params,
                  const std::function<void(const std::string &,
                                           const numerics::Matrix &)> &fn);

bool SameShapes(const ModelParams &a, const ModelParams &b);
bool BitIdentical(const ModelParams &a, const ModelParams &b);

// Per-layer post-ReLU encoder outputs for one utterance.
struct LayerActivations {
  std::vector<numerics::Matrix> layers;  // each T×width
  std::vector<std::string> labels;
};

// Everything the backward pass needs, plus the public outputs.
struct ForwardTrace {
  Head head = Head::kTarget;
  numerics::Matrix stacked;              // T×stacked_dim input
  std::vector<numerics::Matrix> pre;     // pre-ReLU per encoder layer
  std::vector<numerics::Matrix> post;    // post-ReLU per encoder layer
  numerics::Matrix logits;               // T×V_head

  ctc::LogitSeq Logits() const { return {logits}; }
  LayerActivations Activations() const;
};

// Context-stack (edge frames replicated), run the encoder, apply the
// selected head. frames is T×feature_dim.
ForwardTrace Forward(const ModelParams &params, const numerics::Matrix &frames,
                     Head head);

// Accumulates d loss / d params into |grads| given d loss / d logits.
// |grads| must be ZerosLike-shaped; existing values are added to, so
// batching is a plain loop over utterances.
void Backward(const ModelParams &params, const ForwardTrace &trace,
              const numerics::Matrix &dlogits, ModelParams *grads);

// Selected head gets fresh uniform(-scale, scale) weights and zero
// biases; every other tensor is left bit-identical.
void ReinitHead(ModelParams *params, Head head, numerics::Rng *rng,
                double scale);

}  // namespace model
}  // namespace czsda

#endif  // CZSDA_MODEL_MODEL_H_
