// tests/pipeline-test.cc

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

#include <cmath>
#include <filesystem>
#include <set>

#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/ctc/ctc.h"
#include "czsda/model/model.h"
#include "czsda/pipeline/data.h"
#include "czsda/pipeline/run.h"
#include "czsda/pipeline/stages.h"
#include "czsda/pipeline/train-config.h"
#include "czsda/synthlang/corpus.h"
#include "doctest.h"

using czsda::KvConfig;
using czsda::ctc::TokenSeq;
using czsda::model::Head;
using czsda::model::InitModel;
using czsda::model::ModelConfig;
using czsda::model::ModelParams;
using czsda::numerics::Matrix;
using czsda::numerics::Rng;
using czsda::pipeline::CtcExample;
using czsda::pipeline::EpochSampler;
using czsda::pipeline::LoadedCorpus;
using czsda::pipeline::LoadedUtterance;
using czsda::pipeline::Mode;
using czsda::pipeline::TrainConfig;

namespace {

namespace fs = std::filesystem;

ModelConfig TinyModelConfig() {
  ModelConfig config;
  config.feature_dim = 4;
  config.context_radius = 1;
  config.encoder_layers = 2;
  config.hidden_width = 8;
  config.vocab_target = 4;
  config.vocab_source = 4;  // translit sizing: source branch = target vocab
  config.ssl_clusters = 3;
  return config;
}

TrainConfig TinyTrainConfig() {
  auto kv = KvConfig::FromString(
      "mode = translit-zsda\n"
      "batch_size = 4\n"
      "updates_curriculum = 3\n"
      "updates_seed = 3\n"
      "updates_pseudo_label = 3\n"
      "updates_finetune = 3\n"
      "encoder_layers = 2\n"
      "hidden_width = 8\n"
      "context_radius = 1\n"
      "ssl_clusters = 3\n");
  return TrainConfig::FromKv(kv);
}

LoadedCorpus TinyCorpus(int count, int vocab, Rng *rng, bool labeled = true,
                        int min_frames = 8, const std::string &lang = "alpha") {
  LoadedCorpus corpus;
  corpus.manifest_path = "memory";
  for (int i = 0; i < count; ++i) {
    LoadedUtterance utt;
    utt.id = "utt" + std::to_string(i);
    utt.language = lang;
    utt.domain = "studio";
    const int frames = min_frames + rng->UniformInt(5);
    utt.frames = Matrix(frames, 4);
    for (double &v : utt.frames.Flat()) v = rng->Uniform(-1.0, 1.0);
    if (labeled) {
      utt.labeled = true;
      utt.tokens.vocab = vocab;
      const int len = 1 + rng->UniformInt(3);
      for (int k = 0; k < len; ++k) {
        utt.tokens.tokens.push_back(1 + rng->UniformInt(vocab - 1));
      }
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

std::string TempDir(const std::string &stem) {
  const fs::path dir = fs::temp_directory_path() / stem;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("train config applies mode schedules with equal totals") {
  for (const std::string mode :
       {"scratch", "ssl-zsda", "translit-zsda", "sup-zsda",
        "sup-zsda-curriculum"}) {
    auto kv = KvConfig::FromString("mode = " + mode + "\n");
    const TrainConfig config = TrainConfig::FromKv(kv);
    CHECK(config.TotalUpdates() == 7000);
  }
  const TrainConfig translit =
      TrainConfig::FromKv(KvConfig::FromString("mode = translit-zsda\n"));
  CHECK(translit.updates_curriculum == 2000);
  CHECK(translit.updates_seed == 1000);
  CHECK(translit.updates_pseudo_label == 2000);
  CHECK(translit.updates_finetune == 2000);
}

TEST_CASE("train config forces missing stages to zero and validates") {
  auto kv = KvConfig::FromString(
      "mode = scratch\n"
      "updates_curriculum = 500\n"
      "updates_pseudo_label = 100\n");
  const TrainConfig config = TrainConfig::FromKv(kv);
  CHECK(config.updates_curriculum == 0);
  CHECK(config.updates_pseudo_label == 0);
  CHECK(config.freeze_fraction == 0.0);  // scratch fine-tunes from scratch

  CHECK_THROWS_AS(
      TrainConfig::FromKv(KvConfig::FromString("batch_size = 0\n")),
      czsda::ConfigError);
  CHECK_THROWS_AS(
      TrainConfig::FromKv(KvConfig::FromString("ema_decay = 1.5\n")),
      czsda::ConfigError);
  CHECK_THROWS_AS(
      TrainConfig::FromKv(KvConfig::FromString("mystery_key = 1\n")),
      czsda::ConfigError);
}

TEST_CASE("no-curriculum ablation folds its budget into seeding") {
  auto kv = KvConfig::FromString(
      "mode = translit-zsda\n"
      "no_curriculum = true\n");
  const TrainConfig config = TrainConfig::FromKv(kv);
  CHECK(config.updates_curriculum == 0);
  CHECK(config.updates_seed == 3000);
  CHECK(config.TotalUpdates() == 7000);
}

TEST_CASE("config hash is stable and sensitive") {
  const TrainConfig a =
      TrainConfig::FromKv(KvConfig::FromString("mode = scratch\n"));
  const TrainConfig b =
      TrainConfig::FromKv(KvConfig::FromString("mode = scratch\n"));
  CHECK(a.ConfigHash() == b.ConfigHash());
  const TrainConfig c =
      TrainConfig::FromKv(KvConfig::FromString("mode = scratch\nseed = 2\n"));
  CHECK(a.ConfigHash() != c.ConfigHash());
}

TEST_CASE("epoch sampler covers every index each epoch and reshuffles") {
  EpochSampler sampler(7, Rng(5));
  std::set<int> first_epoch;
  for (int i = 0; i < 7; ++i) first_epoch.insert(sampler.Next());
  CHECK(first_epoch.size() == 7);
  std::set<int> second_epoch;
  for (int i = 0; i < 7; ++i) second_epoch.insert(sampler.Next());
  CHECK(second_epoch.size() == 7);

  EpochSampler again(7, Rng(5));
  EpochSampler same(7, Rng(5));
  for (int i = 0; i < 20; ++i) CHECK(again.Next() == same.Next());
}

TEST_CASE("ctc batch loss equals the mean of per-utterance losses without masks") {
  Rng rng(1);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  LoadedCorpus corpus = TinyCorpus(5, 4, &rng);

  std::vector<CtcExample> batch;
  for (const auto &utt : corpus.utterances) {
    batch.push_back({&utt.frames, utt.tokens});
  }
  czsda::model::MaskSpec no_mask;
  no_mask.time_mask_prob = 0.0;
  no_mask.channel_mask_prob = 0.0;

  const auto result = czsda::pipeline::CtcBatchLoss(
      params, Head::kTarget, batch, no_mask, true, Rng(9));
  CHECK(result.used == 5);
  CHECK(result.skipped == 0);

  double expected = 0.0;
  for (const auto &utt : corpus.utterances) {
    const auto trace = Forward(params, utt.frames, Head::kTarget);
    expected += czsda::ctc::CtcLossValue(trace.Logits(), utt.tokens);
  }
  CHECK(result.loss == doctest::Approx(expected / 5.0).epsilon(1e-12));
}

TEST_CASE("ctc batch loss skips infeasible utterances and counts them") {
  Rng rng(2);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  Matrix short_frames(1, 4);
  TokenSeq long_target{{1, 2, 3}, 4};
  Matrix ok_frames(8, 4);
  for (double &v : ok_frames.Flat()) v = rng.Uniform(-1.0, 1.0);
  TokenSeq ok_target{{2}, 4};

  std::vector<CtcExample> batch = {{&short_frames, long_target},
                                   {&ok_frames, ok_target}};
  const auto result = czsda::pipeline::CtcBatchLoss(
      params, Head::kTarget, batch, czsda::model::MaskSpec{}, true, Rng(3));
  CHECK(result.used == 1);
  CHECK(result.skipped == 1);

  CHECK_THROWS_AS(
      czsda::pipeline::CtcBatchLoss(params, Head::kTarget, batch,
                                    czsda::model::MaskSpec{}, false, Rng(3)),
      czsda::TrainingError);
}

TEST_CASE("zero-update stages leave parameters untouched") {
  Rng rng(3);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  const ModelParams before = params;
  LoadedCorpus corpus = TinyCorpus(6, 4, &rng);

  TrainConfig config = TinyTrainConfig();
  config.updates_curriculum = 0;
  config.updates_seed = 0;

  std::vector<const LoadedUtterance *> pool;
  std::vector<const std::vector<int> *> labels;
  std::vector<std::vector<int>> label_storage;
  for (const auto &utt : corpus.utterances) {
    pool.push_back(&utt);
    label_storage.emplace_back(utt.frames.Rows(), 0);
  }
  for (const auto &seq : label_storage) labels.push_back(&seq);

  const auto report = czsda::pipeline::StageCurriculum(
      &params, pool, labels, config, Rng(7));
  CHECK(report.updates == 0);
  CHECK(czsda::model::BitIdentical(params, before));

  const auto seed_report =
      czsda::pipeline::StageSeed(&params, corpus, config, Rng(8));
  CHECK(seed_report.updates == 0);
  CHECK(czsda::model::BitIdentical(params, before));
}

TEST_CASE("seeding raises when every utterance is infeasible") {
  Rng rng(4);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  LoadedCorpus corpus = TinyCorpus(3, 4, &rng, true, 1);
  for (auto &utt : corpus.utterances) {
    utt.frames = Matrix(1, 4);              // one frame
    utt.tokens.tokens = {1, 1, 2, 2};       // needs 6 frames
  }
  TrainConfig config = TinyTrainConfig();
  CHECK_THROWS_AS(
      czsda::pipeline::StageSeed(&params, corpus, config, Rng(1)),
      czsda::TrainingError);
}

TEST_CASE("pseudo-labeling initializes the source branch from the seed target head") {
  Rng rng(5);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  CHECK_FALSE(params.head_source.weight == params.head_target.weight);

  LoadedCorpus labeled = TinyCorpus(4, 4, &rng);
  LoadedCorpus unlabeled = TinyCorpus(4, 4, &rng, false);
  TrainConfig config = TinyTrainConfig();
  config.updates_pseudo_label = 0;  // stage start effects only

  const auto result = czsda::pipeline::StagePseudoLabel(
      &params, labeled, unlabeled, config, Rng(2));
  CHECK(params.head_source.weight == params.head_target.weight);
  CHECK(params.head_source.bias == params.head_target.bias);
  // Teacher starts as the student.
  CHECK(czsda::model::BitIdentical(result.teacher.params, params));
}

TEST_CASE("pseudo-labeling skips empty transliterations and counts them") {
  Rng rng(6);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  // Zero params: the teacher decodes blanks only, so every U utterance
  // is skipped on every update.
  ForEachParam(&params, [](const std::string &, Matrix *m) { m->Fill(0.0); });

  LoadedCorpus labeled = TinyCorpus(4, 4, &rng);
  LoadedCorpus unlabeled = TinyCorpus(4, 4, &rng, false);
  TrainConfig config = TinyTrainConfig();
  config.updates_pseudo_label = 3;

  const auto result = czsda::pipeline::StagePseudoLabel(
      &params, labeled, unlabeled, config, Rng(2));
  CHECK(result.report.skipped ==
        static_cast<std::int64_t>(3) * config.batch_size);
}

TEST_CASE("ema teacher tracks alpha*shadow + (1-alpha)*student after every update") {
  Rng rng(7);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  LoadedCorpus labeled = TinyCorpus(6, 4, &rng);
  LoadedCorpus unlabeled = TinyCorpus(6, 4, &rng, false);
  TrainConfig config = TinyTrainConfig();
  config.updates_pseudo_label = 5;
  config.ema_decay = 0.9;

  int checks = 0;
  czsda::pipeline::PseudoLabelObserver observer;
  observer.after_update = [&](int, const ModelParams &shadow_before,
                              const ModelParams &student,
                              const ModelParams &shadow_after) {
    std::vector<const Matrix *> before, after, theta;
    ForEachParam(shadow_before, [&](const std::string &, const Matrix &m) {
      before.push_back(&m);
    });
    ForEachParam(shadow_after, [&](const std::string &, const Matrix &m) {
      after.push_back(&m);
    });
    ForEachParam(student, [&](const std::string &, const Matrix &m) {
      theta.push_back(&m);
    });
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t k = 0; k < before[i]->Size(); ++k) {
        const double expected =
            0.9 * before[i]->Flat()[k] + 0.1 * theta[i]->Flat()[k];
        CHECK(std::fabs(after[i]->Flat()[k] - expected) < 1e-12);
        ++checks;
      }
    }
  };
  czsda::pipeline::StagePseudoLabel(&params, labeled, unlabeled, config,
                                    Rng(2), nullptr, &observer);
  CHECK(checks > 0);
}

TEST_CASE("disabling continuous pseudo-labeling freezes the teacher at the seed") {
  Rng rng(8);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  const ModelParams seed_params = params;
  LoadedCorpus labeled = TinyCorpus(6, 4, &rng);
  LoadedCorpus unlabeled = TinyCorpus(6, 4, &rng, false);
  TrainConfig config = TinyTrainConfig();
  config.updates_pseudo_label = 4;
  config.continuous_pl = false;

  const auto result = czsda::pipeline::StagePseudoLabel(
      &params, labeled, unlabeled, config, Rng(2));
  // Teacher untouched at the stage-start state (seed with the source
  // branch copied from the target head); student moved.
  ModelParams stage_start = seed_params;
  stage_start.head_source = stage_start.head_target;
  CHECK(czsda::model::BitIdentical(result.teacher.params, stage_start));
  CHECK_FALSE(czsda::model::BitIdentical(params, stage_start));
}

TEST_CASE("near-one ema decay keeps the teacher within 1e-3 of the seed") {
  Rng rng(9);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  const ModelParams seed_params = params;
  LoadedCorpus labeled = TinyCorpus(6, 4, &rng);
  LoadedCorpus unlabeled = TinyCorpus(6, 4, &rng, false);
  TrainConfig config = TinyTrainConfig();
  config.updates_pseudo_label = 10;
  config.ema_decay = 0.999999;

  const auto result = czsda::pipeline::StagePseudoLabel(
      &params, labeled, unlabeled, config, Rng(2));
  ModelParams stage_start = seed_params;
  stage_start.head_source = stage_start.head_target;
  double drift = 0.0;
  std::vector<const Matrix *> teacher, seed;
  ForEachParam(result.teacher.params,
               [&](const std::string &, const Matrix &m) {
                 teacher.push_back(&m);
               });
  ForEachParam(stage_start, [&](const std::string &, const Matrix &m) {
    seed.push_back(&m);
  });
  for (std::size_t i = 0; i < teacher.size(); ++i) {
    for (std::size_t k = 0; k < teacher[i]->Size(); ++k) {
      drift = std::max(drift,
                       std::fabs(teacher[i]->Flat()[k] - seed[i]->Flat()[k]));
    }
  }
  CHECK(drift < 1e-3);
  CHECK(drift > 0.0);  // still an EMA, not a frozen copy
}

TEST_CASE("finetune freezes the encoder for the frozen fraction") {
  Rng rng(10);
  ModelParams params = InitModel(TinyModelConfig(), &rng);
  LoadedCorpus labeled = TinyCorpus(6, 4, &rng);

  TrainConfig config = TinyTrainConfig();
  config.updates_finetune = 4;
  config.freeze_fraction = 1.0;  // whole stage frozen
  ModelParams fully_frozen = params;
  czsda::pipeline::StageFinetune(&fully_frozen, labeled, config, Rng(3));
  for (std::size_t i = 0; i < params.encoder.size(); ++i) {
    CHECK(fully_frozen.encoder[i].weight == params.encoder[i].weight);
    CHECK(fully_frozen.encoder[i].bias == params.encoder[i].bias);
  }
  // Head was reinitialized and trained.
  CHECK_FALSE(fully_frozen.head_target.weight == params.head_target.weight);

  config.freeze_fraction = 0.5;
  ModelParams half_frozen = params;
  czsda::pipeline::StageFinetune(&half_frozen, labeled, config, Rng(3));
  bool encoder_moved = false;
  for (std::size_t i = 0; i < params.encoder.size(); ++i) {
    if (!(half_frozen.encoder[i].weight == params.encoder[i].weight)) {
      encoder_moved = true;
    }
  }
  CHECK(encoder_moved);
}

TEST_CASE("run training wires modes, writes stage checkpoints and is deterministic") {
  const std::string data_dir = TempDir("czsda-pipe-data");
  czsda::synth::ScenarioConfig scenario;
  scenario.n_labeled = 24;
  scenario.n_unlabeled = 24;
  scenario.n_dev = 4;
  scenario.n_test = 6;
  czsda::synth::GenCorpus(scenario, 5, data_dir);

  auto kv = KvConfig::FromString(
      "mode = translit-zsda\n"
      "batch_size = 4\n"
      "updates_curriculum = 6\n"
      "updates_seed = 6\n"
      "updates_pseudo_label = 6\n"
      "updates_finetune = 6\n"
      "ssl_clusters = 6\n"
      "kmeans_iters = 4\n"
      "seed = 3\n");
  const TrainConfig config = TrainConfig::FromKv(kv);

  const std::string out_a = TempDir("czsda-pipe-out-a");
  const std::string out_b = TempDir("czsda-pipe-out-b");
  const auto run_a = czsda::pipeline::RunTraining(config, data_dir, out_a);
  const auto run_b = czsda::pipeline::RunTraining(config, data_dir, out_b);

  CHECK(run_a.stage_ckpts.count("curriculum") == 1);
  CHECK(run_a.stage_ckpts.count("seed") == 1);
  CHECK(run_a.stage_ckpts.count("pseudo_label") == 1);
  CHECK(run_a.stage_ckpts.count("finetune") == 1);
  CHECK(run_a.reports.size() == 4);

  // Identical (config, corpus, seed) gives byte-identical checkpoints.
  CHECK(czsda::io::ReadTextFile(run_a.final_ckpt_path) ==
        czsda::io::ReadTextFile(run_b.final_ckpt_path));

  // The pseudo-label stage checkpoint carries the EMA teacher.
  const auto pl_ckpt =
      czsda::model::LoadCheckpoint(run_a.stage_ckpts.at("pseudo_label"));
  CHECK(pl_ckpt.ema.has_value());
  CHECK(pl_ckpt.ssl_codebook.has_value());

  fs::remove_all(data_dir);
  fs::remove_all(out_a);
  fs::remove_all(out_b);
}

TEST_CASE("zero-shot contract: sidecar rules per mode") {
  const std::string data_dir = TempDir("czsda-pipe-contract");
  czsda::synth::ScenarioConfig scenario;
  scenario.n_labeled = 12;
  scenario.n_unlabeled = 12;
  scenario.n_dev = 2;
  scenario.n_test = 2;
  const auto layout = czsda::synth::GenCorpus(scenario, 6, data_dir);

  auto small = [](const std::string &mode) {
    return TrainConfig::FromKv(KvConfig::FromString(
        "mode = " + mode +
        "\nbatch_size = 4\nupdates_curriculum = 2\nupdates_seed = 2\n"
        "updates_pseudo_label = 2\nupdates_sup_xlpt = 2\n"
        "updates_finetune = 2\nssl_clusters = 4\nkmeans_iters = 2\n"));
  };

  const std::string out = TempDir("czsda-pipe-contract-out");
  // Unsupervised mode pointed at the sidecar: contract violation.
  CHECK_THROWS_AS(
      czsda::pipeline::RunTraining(small("translit-zsda"), data_dir,
                                   out + "/a", layout.Sidecar()),
      czsda::ContractViolationError);

  // Supervised mode with the sidecar removed: contract violation.
  fs::remove(layout.Sidecar());
  CHECK_THROWS_AS(
      czsda::pipeline::RunTraining(small("sup-zsda"), data_dir, out + "/b"),
      czsda::ContractViolationError);

  // Unsupervised modes still fully functional without the sidecar.
  const auto result = czsda::pipeline::RunTraining(small("translit-zsda"),
                                                   data_dir, out + "/c");
  CHECK(fs::exists(result.final_ckpt_path));

  fs::remove_all(data_dir);
  fs::remove_all(out);
}
