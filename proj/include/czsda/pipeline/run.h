// czsda/pipeline/run.h

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

#ifndef CZSDA_PIPELINE_RUN_H_
#define CZSDA_PIPELINE_RUN_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/stages.h"
#include "czsda/pipeline/train-config.h"

namespace czsda {
namespace pipeline {

struct RunResult {
  model::Checkpoint final;
  std::string final_ckpt_path;
  std::vector<StageReport> reports;
  std::map<std::string, std::string> stage_ckpts;  // stage name -> path
  std::int64_t TotalSkipped() const;
};

// Executes the full mode wiring against a generated corpus directory:
//   scratch              finetune from random init (freeze 0)
//   ssl-zsda             curriculum(L ∪ U) -> finetune
//   translit-zsda        curriculum -> seed -> pseudo-label -> finetune
//   sup-zsda             supervised XLPT (true U labels) -> finetune
//   sup-zsda-curriculum  curriculum -> supervised XLPT -> finetune
//   source-asr           supervised source-head training on the sidecar
//
// Checkpoints land in |out_dir| as <mode>.<stage>.ckpt plus
// <mode>.final.ckpt; stage reports append to <out_dir>/stages.log as
// JSON lines carrying the config hash.
//
// Zero-shot contract: only sup-zsda, sup-zsda-curriculum and source-asr
// ever open the sidecar. They throw ContractViolationError when it is
// missing; |sidecar_override| pointed at any path by another mode
// throws as well.
RunResult RunTraining(const TrainConfig &config, const std::string &corpus_dir,
                      const std::string &out_dir,
                      const std::optional<std::string> &sidecar_override = {},
                      const ProgressFn &progress = nullptr,
                      const PseudoLabelObserver *observer = nullptr);

}  // namespace pipeline
}  // namespace czsda

#endif  // CZSDA_PIPELINE_RUN_H_
