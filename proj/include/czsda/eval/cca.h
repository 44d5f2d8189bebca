// czsda/eval/cca.h

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

#ifndef CZSDA_EVAL_CCA_H_
#define CZSDA_EVAL_CCA_H_

#include <optional>
#include <string>
#include <vector>

#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/data.h"

namespace czsda {
namespace eval {

struct CcaLayerResult {
  std::string label;
  // Absent when the layer's covariance collapsed beyond the ridge.
  std::optional<double> similarity;
  double epsilon = 0.0;  // ridge actually used (x side)
  int samples = 0;
};

struct CcaReport {
  std::vector<CcaLayerResult> layers;
  std::string config_hash;
};

// Classical CCA per layer: center both pooled matrices, whiten through
// ridge-regularized covariances (epsilon = 1e-6 * trace / width on the
// diagonal), take the singular values of the whitened cross-covariance,
// clip to [0, 1] and average. Frames beyond |sample_cap| are thinned by
// a uniform deterministic stride.
CcaReport CcaSimilarity(const std::vector<model::LayerActivations> &a,
                        const std::vector<model::LayerActivations> &b,
                        int sample_cap = 4096);

// Forward every utterance of a manifest and keep per-layer activations.
// The head only affects logits, not the captured encoder layers.
std::vector<model::LayerActivations> CollectActivations(
    const model::Checkpoint &ckpt, const pipeline::LoadedCorpus &corpus);

// CSV: layer,similarity,samples,epsilon,config ("-" when collapsed).
std::string CcaCsv(const CcaReport &report);

}  // namespace eval
}  // namespace czsda

#endif  // CZSDA_EVAL_CCA_H_
