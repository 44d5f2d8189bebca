// czsda/eval/pca.h

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

#ifndef CZSDA_EVAL_PCA_H_
#define CZSDA_EVAL_PCA_H_

#include <string>
#include <vector>

#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/data.h"

namespace czsda {
namespace eval {

struct PcaPoint {
  double x = 0.0;
  double y = 0.0;
  int token = 0;        // per-frame greedy label
  std::string domain;
};

struct PcaResult {
  std::vector<PcaPoint> points;           // one per pooled frame
  std::vector<double> explained;          // variance ratios, descending
  numerics::Matrix components;            // 2×width, orthonormal rows

  double RetainedVariance() const {
    return explained.size() < 2 ? 0.0 : explained[0] + explained[1];
  }
};

// Top-2 principal components of pooled rows; |tokens| and |domains| tag
// each row. Component signs are pinned (largest-magnitude entry
// positive), so duplicated data projects to duplicated points.
PcaResult PcaOnPoints(const numerics::Matrix &pooled,
                      const std::vector<int> &tokens,
                      const std::vector<std::string> &domains);

// Pools one encoder layer's activations over a corpus (layer_index < 0
// means the last layer); each frame carries the utterance's domain tag
// and the per-frame greedy token from the chosen head.
PcaResult PcaProject(const model::Checkpoint &ckpt,
                     const pipeline::LoadedCorpus &corpus, model::Head head,
                     int layer_index = -1);

// CSV: x,y,token,domain ; the header line is preceded by comment lines
// carrying the explained-variance ratios.
std::string PcaCsv(const PcaResult &result);

}  // namespace eval
}  // namespace czsda

#endif  // CZSDA_EVAL_PCA_H_
