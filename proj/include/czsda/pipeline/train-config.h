// czsda/pipeline/train-config.h

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

#ifndef CZSDA_PIPELINE_TRAIN_CONFIG_H_
#define CZSDA_PIPELINE_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>

#include "czsda/base/kv-config.h"
#include "czsda/model/masking.h"
#include "czsda/numerics/adam.h"

namespace czsda {
namespace pipeline {

// Training recipes. Every mode totals 7000 updates by default so the
// comparison across modes is update-matched:
//   scratch             finetune 7000 (freeze 0)
//   ssl-zsda            curriculum 5000 + finetune 2000
//   translit-zsda       curriculum 2000 + seed 1000 + pseudo-label 2000
//                       + finetune 2000
//   sup-zsda            supervised XLPT 5000 + finetune 2000
//   sup-zsda-curriculum curriculum 2000 + supervised XLPT 3000
//                       + finetune 2000
//   source-asr          supervised training of the source head on the
//                       sidecar, 3000 updates (metric oracle for BT-CTC)
enum class Mode {
  kScratch,
  kSslZsda,
  kTranslitZsda,
  kSupZsda,
  kSupZsdaCurriculum,
  kSourceAsr,
};

std::string ModeName(Mode mode);
Mode ParseMode(const std::string &name);

// Which corpora feed the curriculum stage; "l-only"/"u-only" are the
// curriculum data ablations.
enum class CurriculumPool { kBoth, kLabeledOnly, kUnlabeledOnly };

struct TrainConfig {
  Mode mode = Mode::kTranslitZsda;
  std::uint64_t seed = 1;

  int updates_curriculum = 0;
  int updates_seed = 0;
  int updates_pseudo_label = 0;
  int updates_sup_xlpt = 0;
  int updates_finetune = 0;

  double lr = 3e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int batch_size = 16;

  double ema_decay = 0.999;
  model::MaskSpec mask;

  double freeze_fraction = 0.125;  // head-only fraction of finetune
  int ssl_clusters = 32;
  int kmeans_iters = 20;
  double head_init_scale = 0.0;    // 0 = 1/sqrt(fan-in)

  bool skip_infeasible = true;
  bool no_curriculum = false;      // fold the curriculum budget into seeding
  bool continuous_pl = true;       // false freezes the teacher at the seed model
  bool shared_head = false;        // pseudo-labeling loss through the target head
  CurriculumPool curriculum_pool = CurriculumPool::kBoth;

  // Model shape.
  int encoder_layers = 3;
  int hidden_width = 64;
  int context_radius = 2;

  // Applies mode defaults, then file values, then validates. Modes that
  // lack a stage get that stage forced to zero updates.
  static TrainConfig FromKv(const KvConfig &kv);
  KvConfig ToKv() const;
  std::string ConfigHash() const;

  numerics::AdamConfig Adam() const {
    return {lr, adam_beta1, adam_beta2, adam_eps};
  }
  int TotalUpdates() const {
    return updates_curriculum + updates_seed + updates_pseudo_label +
           updates_sup_xlpt + updates_finetune;
  }
};

}  // namespace pipeline
}  // namespace czsda

#endif  // CZSDA_PIPELINE_TRAIN_CONFIG_H_
