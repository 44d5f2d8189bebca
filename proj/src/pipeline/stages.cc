// czsda/pipeline/stages.cc

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

#include "czsda/pipeline/stages.h"

#include <chrono>
#include <cmath>

#include "czsda/base/error.h"
#include "czsda/numerics/adam.h"

namespace czsda {
namespace pipeline {

using model::Head;
using model::ModelParams;
using numerics::Matrix;
using numerics::Rng;

namespace {

// Split tags; update indices stay far below these.
enum : std::uint64_t {
  kTagSamplerL = 1ULL << 32,
  kTagSamplerU = (1ULL << 32) + 1,
  kTagReinit = (1ULL << 32) + 2,
  kTagSupBatch = 1,
  kTagPlBatch = 2,
};

class StageClock {
 public:
  StageClock() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

int SampleStride(int updates) { return std::max(1, updates / 100); }

void RecordSample(StageReport *report, const ProgressFn &progress, int update,
                  double loss) {
  report->loss_curve.emplace_back(update, loss);
  if (progress) {
    progress("stage=" + report->stage + " update=" + std::to_string(update) +
             " loss=" + std::to_string(loss));
  }
}

// Adam over the trainable subset. Parameter and gradient tensors visit
// in the same fixed order.
void ApplyGrads(ModelParams *params, const ModelParams &grads,
                numerics::AdamState *adam, const TrainablePredicate &trainable) {
  std::vector<std::pair<std::string, Matrix *>> slots;
  ForEachParam(params, [&slots](const std::string &name, Matrix *m) {
    slots.emplace_back(name, m);
  });
  std::size_t index = 0;
  ForEachParam(grads, [&](const std::string &name, const Matrix &g) {
    auto &[slot_name, param] = slots[index++];
    if (slot_name == name && trainable(name)) adam->Step(name, param, g);
  });
}

bool EncoderOr(const std::string &name, const std::string &head) {
  return name.rfind("encoder", 0) == 0 || name.rfind(head, 0) == 0;
}

std::vector<CtcExample> DrawSupervisedBatch(const LoadedCorpus &corpus,
                                            EpochSampler *sampler, int count) {
  std::vector<CtcExample> batch;
  batch.reserve(count);
  for (int i = 0; i < count; ++i) {
    const LoadedUtterance &utt = corpus.utterances[sampler->Next()];
    batch.push_back({&utt.frames, utt.tokens});
  }
  return batch;
}

}  // namespace

BatchLossResult CtcBatchLoss(const ModelParams &params, Head head,
                             const std::vector<CtcExample> &batch,
                             const model::MaskSpec &mask, bool skip_infeasible,
                             Rng update_rng) {
  BatchLossResult result;
  result.grads = ZerosLike(params);

  double loss_sum = 0.0;
  std::vector<std::pair<const CtcExample *, int>> used;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const CtcExample &example = batch[i];
    if (example.frames->Rows() < ctc::MinFrames(example.target)) {
      if (!skip_infeasible) {
        throw TrainingError("infeasible target (" +
                            std::to_string(example.target.Length()) +
                            " tokens in " +
                            std::to_string(example.frames->Rows()) + " frames)");
      }
      ++result.skipped;
      continue;
    }
    used.emplace_back(&example, static_cast<int>(i));
  }
  if (used.empty()) return result;

  const double inv = 1.0 / static_cast<double>(used.size());
  for (const auto &[example, index] : used) {
    Rng mask_rng = update_rng.Split(static_cast<std::uint64_t>(index));
    const Matrix augmented = MaskAugment(*example->frames, mask, &mask_rng);
    const model::ForwardTrace trace = Forward(params, augmented, head);
    const auto ctc_result = ctc::CtcLoss(trace.Logits(), example->target);
    loss_sum += ctc_result.loss;

    Matrix dlogits = ctc_result.grad;
    numerics::ScaleInPlace(&dlogits, inv);
    Backward(params, trace, dlogits, &result.grads);
  }
  result.loss = loss_sum * inv;
  result.used = static_cast<int>(used.size());
  return result;
}

StageReport StageCurriculum(ModelParams *params,
                            const std::vector<const LoadedUtterance *> &pool,
                            const std::vector<const std::vector<int> *> &labels,
                            const TrainConfig &config, Rng stage_rng,
                            const ProgressFn &progress) {
  if (pool.empty()) throw ConfigError("curriculum pool is empty");
  if (pool.size() != labels.size()) {
    throw ShapeError("curriculum pool and ssl labels differ in size");
  }

  StageClock clock;
  StageReport report;
  report.stage = "curriculum";
  report.updates = config.updates_curriculum;

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler(static_cast<int>(pool.size()),
                       stage_rng.Split(kTagSamplerL));
  const auto trainable = [](const std::string &name) {
    return EncoderOr(name, "head_ssl");
  };
  const int stride = SampleStride(config.updates_curriculum);

  for (int update = 0; update < config.updates_curriculum; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    ModelParams grads = ZerosLike(*params);
    std::vector<Matrix *> grad_slots;
    ForEachParam(&grads, [&grad_slots](const std::string &, Matrix *m) {
      grad_slots.push_back(m);
    });
    double loss_sum = 0.0;
    int used = 0;
    for (int i = 0; i < config.batch_size; ++i) {
      const int pick = sampler.Next();
      Rng mask_rng = update_rng.Split(static_cast<std::uint64_t>(i));
      const auto result = model::SslLoss(*params, pool[pick]->frames,
                                         *labels[pick], config.mask, &mask_rng);
      if (result.masked_frames == 0) {
        ++report.skipped;
        continue;
      }
      loss_sum += result.loss;
      std::size_t index = 0;
      ForEachParam(result.grads, [&](const std::string &, const Matrix &g) {
        AddInPlace(grad_slots[index++], g);
      });
      ++used;
    }
    if (used > 0) {
      ForEachParam(&grads, [used](const std::string &, Matrix *m) {
        numerics::ScaleInPlace(m, 1.0 / used);
      });
      ApplyGrads(params, grads, &adam, trainable);
    }
    if (update % stride == 0) {
      RecordSample(&report, progress, update, used > 0 ? loss_sum / used : 0.0);
    }
  }
  report.wall_seconds = clock.Seconds();
  return report;
}

StageReport StageSeed(ModelParams *params, const LoadedCorpus &labeled,
                      const TrainConfig &config, Rng stage_rng,
                      const ProgressFn &progress) {
  if (labeled.Empty()) throw ConfigError("seeding stage needs labeled data");
  bool any_feasible = false;
  for (const LoadedUtterance &utt : labeled.utterances) {
    if (utt.frames.Rows() >= ctc::MinFrames(utt.tokens)) {
      any_feasible = true;
      break;
    }
  }
  if (!any_feasible) {
    throw TrainingError("every utterance in " + labeled.manifest_path +
                        " is CTC-infeasible");
  }

  StageClock clock;
  StageReport report;
  report.stage = "seed";
  report.updates = config.updates_seed;

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler(labeled.Size(), stage_rng.Split(kTagSamplerL));
  const auto trainable = [](const std::string &name) {
    return EncoderOr(name, "head_target");
  };
  const int stride = SampleStride(config.updates_seed);

  for (int update = 0; update < config.updates_seed; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    const auto batch =
        DrawSupervisedBatch(labeled, &sampler, config.batch_size);
    const auto result =
        CtcBatchLoss(*params, Head::kTarget, batch, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagSupBatch));
    report.skipped += result.skipped;
    if (result.used > 0) ApplyGrads(params, result.grads, &adam, trainable);
    if (update % stride == 0) RecordSample(&report, progress, update, result.loss);
  }
  report.wall_seconds = clock.Seconds();
  return report;
}

PseudoLabelResult StagePseudoLabel(ModelParams *params,
                                   const LoadedCorpus &labeled,
                                   const LoadedCorpus &unlabeled,
                                   const TrainConfig &config, Rng stage_rng,
                                   const ProgressFn &progress,
                                   const PseudoLabelObserver *observer) {
  if (labeled.Empty() || unlabeled.Empty()) {
    throw ConfigError("pseudo-labeling needs both L and U");
  }

  StageClock clock;
  PseudoLabelResult out;
  out.report.stage = "pseudo_label";
  out.report.updates = config.updates_pseudo_label;

  // Both classifier branches start from the seed model.
  params->head_source = params->head_target;
  // The teacher starts as a copy of the seeded student.
  out.teacher = model::MakeEmaShadow(*params, config.ema_decay);

  const int target_vocab = params->head_target.Out();
  const Head pl_head = config.shared_head ? Head::kTarget : Head::kSource;

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler_l(labeled.Size(), stage_rng.Split(kTagSamplerL));
  EpochSampler sampler_u(unlabeled.Size(), stage_rng.Split(kTagSamplerU));
  const auto trainable = [](const std::string &name) {
    return EncoderOr(name, "head_target") || name.rfind("head_source", 0) == 0;
  };
  const int stride = SampleStride(config.updates_pseudo_label);

  for (int update = 0; update < config.updates_pseudo_label; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    const auto batch_l =
        DrawSupervisedBatch(labeled, &sampler_l, config.batch_size);

    // Transliterate the U batch with the un-augmented EMA teacher
    // through the TARGET head: transliterations live in the target
    // language's writing system even though they supervise the source
    // branch.
    std::vector<CtcExample> batch_u;
    batch_u.reserve(config.batch_size);
    for (int i = 0; i < config.batch_size; ++i) {
      const LoadedUtterance &utt = unlabeled.utterances[sampler_u.Next()];
      const model::ForwardTrace trace =
          Forward(out.teacher.params, utt.frames, Head::kTarget);
      ctc::TokenSeq translit = ctc::GreedyDecode(trace.Logits());
      for (int token : translit.tokens) {
        if (token < 1 || token >= target_vocab) {
          throw TrainingError("transliteration token " + std::to_string(token) +
                              " escaped the target vocabulary");
        }
      }
      if (translit.Empty()) {
        ++out.report.skipped;
        continue;
      }
      batch_u.push_back({&utt.frames, std::move(translit)});
    }

    const auto sup =
        CtcBatchLoss(*params, Head::kTarget, batch_l, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagSupBatch));
    const auto pl =
        CtcBatchLoss(*params, pl_head, batch_u, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagPlBatch));
    out.report.skipped += sup.skipped + pl.skipped;

    if (sup.used + pl.used > 0) {
      ModelParams grads = sup.grads;
      std::vector<Matrix *> dst;
      ForEachParam(&grads, [&dst](const std::string &, Matrix *m) {
        dst.push_back(m);
      });
      std::size_t index = 0;
      ForEachParam(pl.grads, [&](const std::string &, const Matrix &g) {
        AddInPlace(dst[index++], g);
      });
      ApplyGrads(params, grads, &adam, trainable);
    }

    if (observer && observer->after_update) {
      const ModelParams shadow_before = out.teacher.params;
      if (config.continuous_pl) EmaUpdate(&out.teacher, *params);
      observer->after_update(update, shadow_before, *params, out.teacher.params);
    } else if (config.continuous_pl) {
      EmaUpdate(&out.teacher, *params);
    }

    if (update % stride == 0) {
      RecordSample(&out.report, progress, update, sup.loss + pl.loss);
    }
  }
  out.report.wall_seconds = clock.Seconds();
  return out;
}

StageReport StageSupXlpt(ModelParams *params, const LoadedCorpus &labeled,
                         const LoadedCorpus &unlabeled_truth,
                         const TrainConfig &config, Rng stage_rng,
                         const ProgressFn &progress) {
  if (labeled.Empty() || unlabeled_truth.Empty()) {
    throw ConfigError("supervised XLPT needs both corpora");
  }
  for (const LoadedUtterance &utt : unlabeled_truth.utterances) {
    if (!utt.labeled) {
      throw ContractViolationError(
          "supervised XLPT requires ground-truth transcripts for U");
    }
  }

  StageClock clock;
  StageReport report;
  report.stage = "sup_xlpt";
  report.updates = config.updates_sup_xlpt;

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler_l(labeled.Size(), stage_rng.Split(kTagSamplerL));
  EpochSampler sampler_u(unlabeled_truth.Size(), stage_rng.Split(kTagSamplerU));
  const auto trainable = [](const std::string &name) {
    return EncoderOr(name, "head_target") || name.rfind("head_source", 0) == 0;
  };
  const int stride = SampleStride(config.updates_sup_xlpt);

  for (int update = 0; update < config.updates_sup_xlpt; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    const auto batch_l =
        DrawSupervisedBatch(labeled, &sampler_l, config.batch_size);
    const auto batch_u =
        DrawSupervisedBatch(unlabeled_truth, &sampler_u, config.batch_size);

    const auto sup =
        CtcBatchLoss(*params, Head::kTarget, batch_l, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagSupBatch));
    const auto cross =
        CtcBatchLoss(*params, Head::kSource, batch_u, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagPlBatch));
    report.skipped += sup.skipped + cross.skipped;

    if (sup.used + cross.used > 0) {
      ModelParams grads = sup.grads;
      std::vector<Matrix *> dst;
      ForEachParam(&grads, [&dst](const std::string &, Matrix *m) {
        dst.push_back(m);
      });
      std::size_t index = 0;
      ForEachParam(cross.grads, [&](const std::string &, const Matrix &g) {
        AddInPlace(dst[index++], g);
      });
      ApplyGrads(params, grads, &adam, trainable);
    }
    if (update % stride == 0) {
      RecordSample(&report, progress, update, sup.loss + cross.loss);
    }
  }
  report.wall_seconds = clock.Seconds();
  return report;
}

StageReport StageFinetune(ModelParams *params, const LoadedCorpus &labeled,
                          const TrainConfig &config, Rng stage_rng,
                          const ProgressFn &progress) {
  if (labeled.Empty()) throw ConfigError("fine-tuning needs labeled data");

  StageClock clock;
  StageReport report;
  report.stage = "finetune";
  report.updates = config.updates_finetune;

  const double scale =
      config.head_init_scale > 0.0
          ? config.head_init_scale
          : 1.0 / std::sqrt(static_cast<double>(params->HiddenWidth()));
  Rng reinit_rng = stage_rng.Split(kTagReinit);
  ReinitHead(params, Head::kTarget, &reinit_rng, scale);

  const int frozen_updates = static_cast<int>(
      std::floor(config.freeze_fraction * config.updates_finetune));

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler(labeled.Size(), stage_rng.Split(kTagSamplerL));
  const int stride = SampleStride(config.updates_finetune);

  for (int update = 0; update < config.updates_finetune; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    const auto batch =
        DrawSupervisedBatch(labeled, &sampler, config.batch_size);
    const auto result =
        CtcBatchLoss(*params, Head::kTarget, batch, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagSupBatch));
    report.skipped += result.skipped;

    const bool frozen = update < frozen_updates;
    const auto trainable = [frozen](const std::string &name) {
      if (frozen) return name.rfind("head_target", 0) == 0;
      return EncoderOr(name, "head_target");
    };
    if (result.used > 0) ApplyGrads(params, result.grads, &adam, trainable);
    if (update % stride == 0) RecordSample(&report, progress, update, result.loss);
  }
  report.wall_seconds = clock.Seconds();
  return report;
}

StageReport StageSourceAsr(ModelParams *params, const LoadedCorpus &labeled,
                           const TrainConfig &config, Rng stage_rng,
                           const ProgressFn &progress) {
  if (labeled.Empty()) throw ConfigError("source-asr needs labeled data");

  StageClock clock;
  StageReport report;
  report.stage = "source_asr";
  report.updates = config.updates_finetune;

  numerics::AdamState adam(config.Adam());
  EpochSampler sampler(labeled.Size(), stage_rng.Split(kTagSamplerL));
  const auto trainable = [](const std::string &name) {
    return EncoderOr(name, "head_source");
  };
  const int stride = SampleStride(config.updates_finetune);

  for (int update = 0; update < config.updates_finetune; ++update) {
    Rng update_rng = stage_rng.Split(static_cast<std::uint64_t>(update));
    const auto batch =
        DrawSupervisedBatch(labeled, &sampler, config.batch_size);
    const auto result =
        CtcBatchLoss(*params, Head::kSource, batch, config.mask,
                     config.skip_infeasible, update_rng.Split(kTagSupBatch));
    report.skipped += result.skipped;
    if (result.used > 0) ApplyGrads(params, result.grads, &adam, trainable);
    if (update % stride == 0) RecordSample(&report, progress, update, result.loss);
  }
  report.wall_seconds = clock.Seconds();
  return report;
}

}  // namespace pipeline
}  // namespace czsda
