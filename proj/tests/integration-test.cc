// tests/integration-test.cc

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

#include <cstdlib>
#include <filesystem>
#include <string>

#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/base/kv-config.h"
#include "czsda/eval/evaluate.h"
#include "czsda/model/ssl.h"
#include "czsda/pipeline/run.h"
#include "czsda/pipeline/stages.h"
#include "czsda/synthlang/corpus.h"
#include "doctest.h"

using czsda::KvConfig;
using czsda::ctc::TokenSeq;
using czsda::model::Head;
using czsda::numerics::Matrix;
using czsda::numerics::Rng;
using czsda::pipeline::LoadedCorpus;
using czsda::pipeline::TrainConfig;

namespace {

namespace fs = std::filesystem;

std::string TempDir(const std::string &stem) {
  const fs::path dir = fs::temp_directory_path() / stem;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

czsda::synth::ScenarioConfig SmallScenario() {
  czsda::synth::ScenarioConfig config;
  config.n_labeled = 300;
  config.n_unlabeled = 300;
  config.n_dev = 40;
  config.n_test = 60;
  return config;
}

TrainConfig SmallTrainConfig(const std::string &mode) {
  return TrainConfig::FromKv(KvConfig::FromString(
      "mode = " + mode +
      "\nupdates_curriculum = 400\nupdates_seed = 300\n"
      "updates_pseudo_label = 300\nupdates_sup_xlpt = 400\n"
      "updates_finetune = 600\nssl_clusters = 16\n"));
}

int RunCli(const std::string &args) {
  const std::string command = std::string(CZSDA_CLI_PATH) + " " + args +
                              " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("a trained recognizer transcribes fresh same-language synthesis") {
  const std::string dir = TempDir("czsda-int-roundtrip");
  const auto layout = czsda::synth::GenCorpus(SmallScenario(), 11, dir);

  const std::string out = TempDir("czsda-int-roundtrip-out");
  TrainConfig config = SmallTrainConfig("scratch");
  config.updates_finetune = 1500;
  const auto trained = czsda::pipeline::RunTraining(config, dir, out);

  // Fresh utterances from the same language and domain as L. Token
  // sequences avoid adjacent repeats: two equal tokens in a row synthe-
  // size to one unbroken prototype segment, which greedy CTC collapses
  // by construction, so repeats measure the decoder's known ambiguity
  // rather than synthesis fidelity.
  const auto lang = czsda::synth::LoadLanguageSpec(layout.LanguageSpecFile("alpha"));
  const auto domain = czsda::synth::LoadDomainSpec(layout.DomainSpecFile("studio"));
  Rng rng(123);
  std::int64_t edits = 0, ref_len = 0;
  for (int i = 0; i < 100; ++i) {
    TokenSeq tokens;
    tokens.vocab = lang.VocabSize();
    const int len = 3 + rng.UniformInt(6);
    for (int k = 0; k < len; ++k) {
      int token = 1 + rng.UniformInt(lang.VocabSize() - 1);
      while (!tokens.tokens.empty() && token == tokens.tokens.back()) {
        token = 1 + rng.UniformInt(lang.VocabSize() - 1);
      }
      tokens.tokens.push_back(token);
    }
    Rng synth_rng = rng.Split(static_cast<std::uint64_t>(i));
    const Matrix frames =
        czsda::synth::Synthesize(lang, tokens, domain, &synth_rng);
    const auto trace =
        Forward(trained.final.params, frames, Head::kTarget);
    const TokenSeq hyp = czsda::ctc::GreedyDecode(trace.Logits());
    edits += czsda::ctc::Levenshtein(tokens, hyp).TotalEdits();
    ref_len += tokens.Length();
  }
  const double cer = 100.0 * static_cast<double>(edits) / ref_len;
  CHECK(cer < 5.0);

  fs::remove_all(dir);
  fs::remove_all(out);
}

TEST_CASE("curriculum training lowers the ssl loss on held-out data") {
  const std::string dir = TempDir("czsda-int-curr");
  czsda::synth::GenCorpus(SmallScenario(), 13, dir);
  const czsda::synth::CorpusLayout layout{dir};

  const LoadedCorpus labeled =
      czsda::pipeline::LoadCorpusData(dir, layout.Manifest("L"));
  const LoadedCorpus unlabeled =
      czsda::pipeline::LoadCorpusData(dir, layout.Manifest("U"));

  std::vector<const czsda::pipeline::LoadedUtterance *> pool;
  std::vector<const Matrix *> frames;
  for (const auto &utt : labeled.utterances) pool.push_back(&utt);
  for (const auto &utt : unlabeled.utterances) pool.push_back(&utt);
  for (const auto *utt : pool) frames.push_back(&utt->frames);

  TrainConfig config = SmallTrainConfig("ssl-zsda");
  config.updates_curriculum = 2000;
  Rng kmeans_rng(3);
  const auto targets = czsda::model::ComputeSslTargets(
      frames, config.ssl_clusters, config.kmeans_iters, &kmeans_rng);

  // Hold out the last 32 pool entries from training.
  const int held_out = 32;
  std::vector<const czsda::pipeline::LoadedUtterance *> train_pool(
      pool.begin(), pool.end() - held_out);
  std::vector<const std::vector<int> *> train_labels;
  for (std::size_t i = 0; i + held_out < pool.size(); ++i) {
    train_labels.push_back(&targets.labels[i]);
  }

  czsda::model::ModelConfig model_config;
  model_config.feature_dim = 16;
  model_config.context_radius = config.context_radius;
  model_config.encoder_layers = config.encoder_layers;
  model_config.hidden_width = config.hidden_width;
  model_config.vocab_target = 13;
  model_config.vocab_source = 13;
  model_config.ssl_clusters = config.ssl_clusters;
  Rng init_rng(5);
  auto params = czsda::model::InitModel(model_config, &init_rng);

  auto held_out_loss = [&](const czsda::model::ModelParams &p) {
    double total = 0.0;
    int counted = 0;
    for (std::size_t k = pool.size() - held_out; k < pool.size(); ++k) {
      Rng mask_rng(9000 + k);  // same masks before and after training
      const auto result = czsda::model::SslLoss(
          p, pool[k]->frames, targets.labels[k], config.mask, &mask_rng);
      if (result.masked_frames == 0) continue;
      total += result.loss;
      ++counted;
    }
    REQUIRE(counted > 0);
    return total / counted;
  };

  const double before = held_out_loss(params);
  czsda::pipeline::StageCurriculum(&params, train_pool, train_labels, config,
                                   Rng(17));
  const double after = held_out_loss(params);
  CHECK(after < before);

  fs::remove_all(dir);
}

TEST_CASE("seeding beats the untrained model on in-domain data") {
  const std::string dir = TempDir("czsda-int-seed");
  czsda::synth::GenCorpus(SmallScenario(), 17, dir);
  const czsda::synth::CorpusLayout layout{dir};
  const LoadedCorpus labeled =
      czsda::pipeline::LoadCorpusData(dir, layout.Manifest("L"));

  czsda::model::ModelConfig model_config;
  model_config.feature_dim = 16;
  model_config.vocab_target = 13;
  model_config.vocab_source = 13;
  Rng init_rng(7);
  auto params = czsda::model::InitModel(model_config, &init_rng);

  czsda::model::Checkpoint untrained;
  untrained.params = params;
  // Source-domain target-language eval slice: the first 50 of L.
  LoadedCorpus eval_slice;
  eval_slice.manifest_path = "L-head";
  eval_slice.utterances.assign(labeled.utterances.begin(),
                               labeled.utterances.begin() + 50);
  const double before =
      czsda::eval::EvaluateCorpus(untrained, eval_slice, Head::kTarget)
          .error_rate;

  TrainConfig config = SmallTrainConfig("translit-zsda");
  config.updates_seed = 400;
  czsda::pipeline::StageSeed(&params, labeled, config, Rng(21));

  czsda::model::Checkpoint seeded;
  seeded.params = params;
  const double after =
      czsda::eval::EvaluateCorpus(seeded, eval_slice, Head::kTarget).error_rate;
  CHECK(after < before);
  CHECK(before > 50.0);  // fresh models transcribe almost nothing

  fs::remove_all(dir);
}

TEST_CASE("cli: gen-data is byte deterministic and scenario flags wire through") {
  const std::string dir = TempDir("czsda-int-cli-gen");
  CHECK(RunCli("gen-data --scenario default --seed 9 --out " + dir + "/a") == 0);
  CHECK(RunCli("gen-data --scenario default --seed 9 --out " + dir + "/b") == 0);
  CHECK(czsda::io::ReadTextFile(dir + "/a/L.tsv") ==
        czsda::io::ReadTextFile(dir + "/b/L.tsv"));
  CHECK(czsda::io::ReadTextFile(dir + "/a/frames/U000000.fram") ==
        czsda::io::ReadTextFile(dir + "/b/frames/U000000.fram"));

  CHECK(RunCli("gen-data --scenario distant --seed 9 --out " + dir + "/c") == 0);
  const auto close_spec =
      czsda::io::ReadTextFile(dir + "/a/lang.beta.spec");
  const auto distant_spec =
      czsda::io::ReadTextFile(dir + "/c/lang.beta.spec");
  CHECK(close_spec != distant_spec);
  CHECK(czsda::io::ReadTextFile(dir + "/c/scenario.txt")
            .find("language_distance=distant") != std::string::npos);

  CHECK(RunCli("gen-data --scenario cross-domain --seed 9 --out " + dir +
               "/d") == 0);
  const auto u_rows = czsda::synth::LoadManifest(dir + "/d/U.tsv");
  CHECK(u_rows.front().domain == "studio");

  fs::remove_all(dir);
}

TEST_CASE("cli: exit codes distinguish usage, io, contract and training errors") {
  const std::string dir = TempDir("czsda-int-cli-codes");

  // Usage: unknown mode / missing required flags / bogus subcommand.
  CHECK(RunCli("train --mode made-up-mode --data " + dir) == 2);
  CHECK(RunCli("decode") == 2);
  CHECK(RunCli("no-such-command") == 2);

  // IO: nonexistent corpus.
  CHECK(RunCli("train --mode scratch --data " + dir +
               "/nowhere --out " + dir + "/o --updates_finetune 1") == 3);

  // Contract: a tiny corpus, sidecar handed to an unsupervised mode,
  // then deleted for a supervised mode.
  const std::string data = dir + "/data";
  czsda::synth::ScenarioConfig scenario;
  scenario.n_labeled = 12;
  scenario.n_unlabeled = 12;
  scenario.n_dev = 2;
  scenario.n_test = 2;
  const auto layout = czsda::synth::GenCorpus(scenario, 3, data);
  const std::string tiny =
      " --batch_size 4 --updates_curriculum 2 --updates_seed 2"
      " --updates_pseudo_label 2 --updates_sup_xlpt 2 --updates_finetune 2"
      " --ssl_clusters 4 --kmeans_iters 2 --quiet";
  CHECK(RunCli("train --mode translit-zsda --data " + data + " --out " + dir +
               "/t1 --sidecar " + layout.Sidecar() + tiny) == 4);

  fs::remove(layout.Sidecar());
  CHECK(RunCli("train --mode sup-zsda --data " + data + " --out " + dir +
               "/t2" + tiny) == 4);
  // Unsupervised modes stay functional without the sidecar.
  CHECK(RunCli("train --mode translit-zsda --data " + data + " --out " + dir +
               "/t3" + tiny) == 0);

  fs::remove_all(dir);
}

TEST_CASE("cli: train, evaluate, decode, analyze chain runs end to end") {
  const std::string dir = TempDir("czsda-int-cli-chain");
  const std::string data = dir + "/data";
  czsda::synth::ScenarioConfig scenario;
  scenario.n_labeled = 60;
  scenario.n_unlabeled = 60;
  scenario.n_dev = 10;
  scenario.n_test = 12;
  czsda::synth::GenCorpus(scenario, 5, data);

  const std::string tiny =
      " --batch_size 8 --updates_curriculum 30 --updates_seed 30"
      " --updates_pseudo_label 30 --updates_finetune 30 --ssl_clusters 8"
      " --kmeans_iters 5 --quiet";
  CHECK(RunCli("train --mode translit-zsda --seed 1 --data " + data +
               " --out " + dir + "/run" + tiny) == 0);
  CHECK(fs::exists(dir + "/run/translit-zsda.curriculum.ckpt"));
  CHECK(fs::exists(dir + "/run/translit-zsda.seed.ckpt"));
  CHECK(fs::exists(dir + "/run/translit-zsda.pseudo_label.ckpt"));
  CHECK(fs::exists(dir + "/run/translit-zsda.finetune.ckpt"));
  CHECK(fs::exists(dir + "/run/stages.log"));

  // The --no-curriculum ablation writes no curriculum checkpoint.
  CHECK(RunCli("train --mode translit-zsda --seed 1 --no_curriculum true"
               " --data " + data + " --out " + dir + "/nocurr" + tiny) == 0);
  CHECK_FALSE(fs::exists(dir + "/nocurr/translit-zsda.curriculum.ckpt"));
  CHECK(fs::exists(dir + "/nocurr/translit-zsda.final.ckpt"));

  const std::string final_ckpt = dir + "/run/translit-zsda.final.ckpt";
  CHECK(RunCli("evaluate --ckpt " + final_ckpt + " --data " + data +
               " --manifest " + data + "/test.tsv --out " + dir +
               "/eval.csv") == 0);
  const std::string eval_csv = czsda::io::ReadTextFile(dir + "/eval.csv");
  CHECK(eval_csv.find("error_rate") != std::string::npos);

  CHECK(RunCli("decode --ckpt " + final_ckpt + " --data " + data +
               " --manifest " + data + "/U.tsv --out " + dir +
               "/translit.tsv") == 0);
  CHECK(fs::exists(dir + "/translit.tsv"));

  CHECK(RunCli("analyze --cca --ckpt-a " + dir +
               "/run/translit-zsda.pseudo_label.ckpt --ckpt-b " + final_ckpt +
               " --data " + data + " --manifest " + data +
               "/test.tsv --out " + dir + "/cca.csv") == 0);
  const std::string cca_csv = czsda::io::ReadTextFile(dir + "/cca.csv");
  CHECK(cca_csv.find("layer,similarity") != std::string::npos);
  CHECK(cca_csv.find("encoder2") != std::string::npos);

  CHECK(RunCli("analyze --pca --ckpt " + final_ckpt + " --data " + data +
               " --manifest " + data + "/test.tsv --out " + dir +
               "/pca.csv") == 0);
  CHECK(czsda::io::ReadTextFile(dir + "/pca.csv").find("x,y,token,domain") !=
        std::string::npos);

  CHECK(RunCli("analyze --token-freq --data " + data + " --manifest " + data +
               "/L.tsv --out " + dir + "/freq.csv") == 0);
  CHECK(czsda::io::ReadTextFile(dir + "/freq.csv").find("token,frequency") !=
        std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("cli: reproduce on a tiny recipe is rerun-identical") {
  const std::string dir = TempDir("czsda-int-cli-rep");
  const std::string recipe = dir + "/recipe.cfg";
  czsda::io::WriteTextFile(dir + "/scenario.cfg",
                           "n_labeled = 60\nn_unlabeled = 60\n"
                           "n_dev = 10\nn_test = 12\n");
  czsda::io::WriteTextFile(
      recipe,
      "modes = scratch,translit-zsda\n"
      "seeds = 1\n"
      "threads = 1\n"
      "data_seed = 5\n"
      "scenario = " + dir + "/scenario.cfg\n"
      "train.batch_size = 8\n"
      "train.updates_curriculum = 20\n"
      "train.updates_seed = 20\n"
      "train.updates_pseudo_label = 20\n"
      "train.updates_finetune = 40\n"
      "train.ssl_clusters = 8\n"
      "train.kmeans_iters = 4\n");

  CHECK(RunCli("reproduce --recipe " + recipe + " --out " + dir + "/a --quiet") == 0);
  CHECK(RunCli("reproduce --recipe " + recipe + " --out " + dir + "/b --quiet") == 0);

  CHECK(czsda::io::ReadTextFile(dir + "/a/reports/summary.csv") ==
        czsda::io::ReadTextFile(dir + "/b/reports/summary.csv"));
  CHECK(czsda::io::ReadTextFile(
            dir + "/a/ckpt/translit-zsda-seed1/translit-zsda.final.ckpt") ==
        czsda::io::ReadTextFile(
            dir + "/b/ckpt/translit-zsda-seed1/translit-zsda.final.ckpt"));
  CHECK(fs::exists(dir + "/a/ckpt/scratch-seed1/scratch.final.ckpt"));
  const std::string summary =
      czsda::io::ReadTextFile(dir + "/a/reports/summary.csv");
  CHECK(summary.find("scratch,1,") != std::string::npos);
  CHECK(summary.find("translit-zsda,1,") != std::string::npos);

  fs::remove_all(dir);
}
