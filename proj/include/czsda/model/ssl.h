// czsda/model/ssl.h

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

#ifndef CZSDA_MODEL_SSL_H_
#define CZSDA_MODEL_SSL_H_

#include <vector>

#include "czsda/model/masking.h"
#include "czsda/model/model.h"
#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"

namespace czsda {
namespace model {

// Frame-level discrete targets for self-supervised pre-training: k-means
// cluster IDs of raw (unstacked) frames, in the spirit of HuBERT's
// masked cluster prediction.
struct SslTargets {
  numerics::Matrix codebook;            // K×d centroids
  std::vector<std::vector<int>> labels; // per utterance, per frame
};

// Lloyd k-means with k-means++ seeding over the pooled frames of every
// utterance given. Fixed iteration cap; ties in the nearest-centroid
// assignment break to the lowest index. Throws ClusteringError when the
// data has fewer distinct frames than clusters.
SslTargets ComputeSslTargets(const std::vector<const numerics::Matrix *> &utterances,
                             int clusters, int max_iters, numerics::Rng *rng);

// Nearest-centroid label for each frame of one utterance.
std::vector<int> AssignClusters(const numerics::Matrix &codebook,
                                const numerics::Matrix &frames);

struct SslLossResult {
  double loss = 0.0;
  ModelParams grads;
  int masked_frames = 0;  // 0 means the loss and grads are identically zero
};

// Masked cluster prediction: corrupt the input with MaskAugment, run the
// SSL head, and average cross-entropy over time-masked positions only.
// With zero masked positions the result is a flagged zero.
SslLossResult SslLoss(const ModelParams &params, const numerics::Matrix &frames,
                      const std::vector<int> &targets, const MaskSpec &spec,
                      numerics::Rng *rng);

}  // namespace model
}  // namespace czsda

#endif  // CZSDA_MODEL_SSL_H_
