// czsda/pipeline/run.cc

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

#include "czsda/pipeline/run.h"

#include <filesystem>
#include <fstream>

#include "czsda/base/error.h"
#include "json.hpp"

namespace czsda {
namespace pipeline {

using model::ModelParams;
using numerics::Rng;

namespace {

enum : std::uint64_t {
  kTagInit = 100,
  kTagKmeans = 101,
  kTagCurriculum = 110,
  kTagSeed = 111,
  kTagPseudoLabel = 112,
  kTagSupXlpt = 113,
  kTagFinetune = 114,
};

bool NeedsSidecar(Mode mode) {
  return mode == Mode::kSupZsda || mode == Mode::kSupZsdaCurriculum ||
         mode == Mode::kSourceAsr;
}

bool NeedsUnlabeled(Mode mode) {
  return mode != Mode::kScratch && mode != Mode::kSourceAsr;
}

bool HasCurriculum(const TrainConfig &config) {
  return config.updates_curriculum > 0;
}

void AppendStageLog(const std::string &out_dir, const TrainConfig &config,
                    const StageReport &report) {
  nlohmann::json entry;
  entry["mode"] = ModeName(config.mode);
  entry["stage"] = report.stage;
  entry["updates"] = report.updates;
  entry["skipped"] = report.skipped;
  entry["wall_seconds"] = report.wall_seconds;
  entry["config"] = config.ConfigHash();
  nlohmann::json curve = nlohmann::json::array();
  for (const auto &[update, loss] : report.loss_curve) {
    curve.push_back({update, loss});
  }
  entry["loss_curve"] = curve;
  std::ofstream os(out_dir + "/stages.log", std::ios::app);
  if (!os) throw IoError("cannot append to " + out_dir + "/stages.log");
  os << entry.dump() << "\n";
}

}  // namespace

std::int64_t RunResult::TotalSkipped() const {
  std::int64_t total = 0;
  for (const StageReport &report : reports) total += report.skipped;
  return total;
}

RunResult RunTraining(const TrainConfig &config, const std::string &corpus_dir,
                      const std::string &out_dir,
                      const std::optional<std::string> &sidecar_override,
                      const ProgressFn &progress,
                      const PseudoLabelObserver *observer) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  const synth::CorpusLayout layout{corpus_dir};
  const std::string sidecar_path =
      sidecar_override ? *sidecar_override : layout.Sidecar();
  if (sidecar_override && !NeedsSidecar(config.mode)) {
    throw ContractViolationError(
        "mode " + ModeName(config.mode) +
        " is unsupervised on U and must not be pointed at a sidecar");
  }

  const LoadedCorpus labeled = LoadCorpusData(corpus_dir, layout.Manifest("L"));
  if (labeled.Empty()) throw ConfigError("L manifest is empty");

  LoadedCorpus unlabeled;
  if (NeedsUnlabeled(config.mode)) {
    unlabeled = LoadCorpusData(corpus_dir, layout.Manifest("U"));
    if (unlabeled.Empty()) throw ConfigError("U manifest is empty");
  }

  LoadedCorpus unlabeled_truth;
  if (NeedsSidecar(config.mode)) {
    if (!fs::exists(sidecar_path)) {
      throw ContractViolationError("mode " + ModeName(config.mode) +
                                   " requires the ground-truth sidecar (" +
                                   sidecar_path + " is missing)");
    }
    unlabeled_truth = LoadCorpusData(corpus_dir, sidecar_path);
  }

  // Head sizing. Transliterations are target-vocabulary sequences, so
  // translit-style modes size the source branch to the target vocab;
  // the supervised modes size it to the source language's own vocab.
  const std::string target_language = labeled.utterances.front().language;
  const int vocab_target = VocabSizeFor(corpus_dir, target_language);
  int vocab_source = vocab_target;
  if (NeedsSidecar(config.mode)) {
    vocab_source = VocabSizeFor(
        corpus_dir, unlabeled_truth.utterances.front().language);
  }

  model::ModelConfig model_config;
  model_config.feature_dim = labeled.utterances.front().frames.Cols();
  model_config.context_radius = config.context_radius;
  model_config.encoder_layers = config.encoder_layers;
  model_config.hidden_width = config.hidden_width;
  model_config.vocab_target = vocab_target;
  model_config.vocab_source = vocab_source;
  model_config.ssl_clusters = config.ssl_clusters;

  Rng root(config.seed);
  Rng init_rng = root.Split(kTagInit);
  ModelParams params = model::InitModel(model_config, &init_rng);

  RunResult result;
  const std::string prefix = out_dir + "/" + ModeName(config.mode);
  auto finish_stage = [&](const StageReport &report,
                          const std::optional<model::EmaShadow> &ema,
                          const std::optional<numerics::Matrix> &codebook) {
    result.reports.push_back(report);
    AppendStageLog(out_dir, config, report);
    const std::string path = prefix + "." + report.stage + ".ckpt";
    model::Checkpoint ckpt;
    ckpt.params = params;
    ckpt.ema = ema;
    ckpt.ssl_codebook = codebook;
    SaveCheckpoint(ckpt, path);
    result.stage_ckpts[report.stage] = path;
  };

  // Curriculum XLPT (self-supervised) where the mode has it.
  std::optional<numerics::Matrix> codebook;
  const bool wants_curriculum =
      (config.mode == Mode::kSslZsda || config.mode == Mode::kTranslitZsda ||
       config.mode == Mode::kSupZsdaCurriculum) &&
      HasCurriculum(config);
  if (wants_curriculum) {
    std::vector<const LoadedUtterance *> pool;
    if (config.curriculum_pool != CurriculumPool::kUnlabeledOnly) {
      for (const auto &utt : labeled.utterances) pool.push_back(&utt);
    }
    if (config.curriculum_pool != CurriculumPool::kLabeledOnly) {
      for (const auto &utt : unlabeled.utterances) pool.push_back(&utt);
    }
    if (pool.empty()) throw ConfigError("curriculum pool is empty");

    std::vector<const numerics::Matrix *> frames;
    frames.reserve(pool.size());
    for (const LoadedUtterance *utt : pool) frames.push_back(&utt->frames);
    Rng kmeans_rng = root.Split(kTagKmeans);
    const model::SslTargets targets = model::ComputeSslTargets(
        frames, config.ssl_clusters, config.kmeans_iters, &kmeans_rng);
    codebook = targets.codebook;

    std::vector<const std::vector<int> *> labels;
    labels.reserve(targets.labels.size());
    for (const auto &seq : targets.labels) labels.push_back(&seq);

    const StageReport report =
        StageCurriculum(&params, pool, labels, config,
                        root.Split(kTagCurriculum), progress);
    finish_stage(report, std::nullopt, codebook);
  }

  // Mode-specific pre-training.
  if (config.mode == Mode::kTranslitZsda) {
    if (config.updates_seed > 0) {
      const StageReport report = StageSeed(&params, labeled, config,
                                           root.Split(kTagSeed), progress);
      finish_stage(report, std::nullopt, codebook);
    }
    if (config.updates_pseudo_label > 0) {
      PseudoLabelResult pl =
          StagePseudoLabel(&params, labeled, unlabeled, config,
                           root.Split(kTagPseudoLabel), progress, observer);
      finish_stage(pl.report, pl.teacher, codebook);
    }
  } else if (config.mode == Mode::kSupZsda ||
             config.mode == Mode::kSupZsdaCurriculum) {
    if (config.updates_sup_xlpt > 0) {
      const StageReport report =
          StageSupXlpt(&params, labeled, unlabeled_truth, config,
                       root.Split(kTagSupXlpt), progress);
      finish_stage(report, std::nullopt, codebook);
    }
  }

  // Final supervised stage.
  if (config.mode == Mode::kSourceAsr) {
    const StageReport report = StageSourceAsr(
        &params, unlabeled_truth, config, root.Split(kTagFinetune), progress);
    finish_stage(report, std::nullopt, codebook);
  } else if (config.updates_finetune > 0) {
    const StageReport report = StageFinetune(
        &params, labeled, config, root.Split(kTagFinetune), progress);
    finish_stage(report, std::nullopt, codebook);
  }

  result.final.params = params;
  result.final.ssl_codebook = codebook;
  result.final_ckpt_path = prefix + ".final.ckpt";
  SaveCheckpoint(result.final, result.final_ckpt_path);
  return result;
}

}  // namespace pipeline
}  // namespace czsda
