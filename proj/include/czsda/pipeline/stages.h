// czsda/pipeline/stages.h

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

#ifndef CZSDA_PIPELINE_STAGES_H_
#define CZSDA_PIPELINE_STAGES_H_

#include <functional>
#include <string>
#include <vector>

#include "czsda/model/ema.h"
#include "czsda/model/model.h"
#include "czsda/model/ssl.h"
#include "czsda/pipeline/data.h"
#include "czsda/pipeline/train-config.h"

namespace czsda {
namespace pipeline {

struct StageReport {
  std::string stage;
  int updates = 0;
  // Sampled (update index, batch loss) pairs, roughly 100 per stage.
  std::vector<std::pair<int, double>> loss_curve;
  std::int64_t skipped = 0;  // utterances dropped (infeasible, empty, unmasked)
  double wall_seconds = 0.0;
};

// Emitted once per sampled update; the CLI prints these verbatim.
using ProgressFn = std::function<void(const std::string &line)>;

// One CTC training example; |target| may differ from the utterance's
// own transcript (pseudo-labeling supervises with transliterations).
struct CtcExample {
  const numerics::Matrix *frames = nullptr;
  ctc::TokenSeq target;
};

struct BatchLossResult {
  double loss = 0.0;          // mean over used examples
  model::ModelParams grads;   // gradient of that mean
  int used = 0;
  int skipped = 0;
};

// Student-side supervised CTC over one batch: each example is mask-
// augmented with its own split of |update_rng|, forwarded through
// |head|, and scored against its target. Infeasible or empty-target
// examples are skipped and counted when |skip_infeasible| is set, and
// raise otherwise.
BatchLossResult CtcBatchLoss(const model::ModelParams &params, model::Head head,
                             const std::vector<CtcExample> &batch,
                             const model::MaskSpec &mask, bool skip_infeasible,
                             numerics::Rng update_rng);

// Names of tensors a stage trains; everything else is frozen.
using TrainablePredicate = std::function<bool(const std::string &name)>;

// Masked cluster-ID prediction on batches from the pooled corpus;
// trains the encoder and the SSL head only. |pool| and |labels| are
// aligned. Throws ConfigError on an empty pool.
StageReport StageCurriculum(model::ModelParams *params,
                            const std::vector<const LoadedUtterance *> &pool,
                            const std::vector<const std::vector<int> *> &labels,
                            const TrainConfig &config, numerics::Rng stage_rng,
                            const ProgressFn &progress = nullptr);

// Supervised CTC on the labeled corpus through the target head.
// Throws TrainingError when no utterance in |labeled| is feasible.
StageReport StageSeed(model::ModelParams *params, const LoadedCorpus &labeled,
                      const TrainConfig &config, numerics::Rng stage_rng,
                      const ProgressFn &progress = nullptr);

// Test hook: called after each pseudo-labeling update with the shadow
// before the EMA step, the student after its optimizer step, and the
// shadow after the EMA step.
struct PseudoLabelObserver {
  std::function<void(int update, const model::ModelParams &shadow_before,
                     const model::ModelParams &student_after,
                     const model::ModelParams &shadow_after)>
      after_update;
};

struct PseudoLabelResult {
  StageReport report;
  model::EmaShadow teacher;
};

// Continuous pseudo-labeling: the EMA teacher (initialized to the
// student) greedy-decodes un-augmented U batches through the TARGET
// head into transliterations, which supervise the student's source head
// (target head when config.shared_head) on augmented input, combined
// with the ordinary supervised loss on L. The source head is first
// initialized from the seed target head. With config.continuous_pl
// false the teacher never updates and stays the seed model.
PseudoLabelResult StagePseudoLabel(model::ModelParams *params,
                                   const LoadedCorpus &labeled,
                                   const LoadedCorpus &unlabeled,
                                   const TrainConfig &config,
                                   numerics::Rng stage_rng,
                                   const ProgressFn &progress = nullptr,
                                   const PseudoLabelObserver *observer = nullptr);

// Supervised XLPT for sup-zsda: CTC on L through the target head plus
// CTC on U's true (sidecar) labels through the source head.
StageReport StageSupXlpt(model::ModelParams *params, const LoadedCorpus &labeled,
                         const LoadedCorpus &unlabeled_truth,
                         const TrainConfig &config, numerics::Rng stage_rng,
                         const ProgressFn &progress = nullptr);

// Target-language fine-tuning: reinitialize the target head, train only
// that head for the first freeze_fraction of updates (encoder bytes
// must not move), then train encoder plus target head jointly.
StageReport StageFinetune(model::ModelParams *params, const LoadedCorpus &labeled,
                          const TrainConfig &config, numerics::Rng stage_rng,
                          const ProgressFn &progress = nullptr);

// Metric oracle: supervised CTC through the SOURCE head on a labeled
// (sidecar) corpus, from the current initialization.
StageReport StageSourceAsr(model::ModelParams *params, const LoadedCorpus &labeled,
                           const TrainConfig &config, numerics::Rng stage_rng,
                           const ProgressFn &progress = nullptr);

}  // namespace pipeline
}  // namespace czsda

#endif  // CZSDA_PIPELINE_STAGES_H_
