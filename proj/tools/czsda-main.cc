// tools/czsda-main.cc

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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/base/kv-config.h"
#include "czsda/eval/bt-ctc.h"
#include "czsda/eval/cca.h"
#include "czsda/eval/evaluate.h"
#include "czsda/eval/pca.h"
#include "czsda/eval/token-freq.h"
#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/experiment.h"
#include "czsda/pipeline/run.h"
#include "czsda/synthlang/corpus.h"

namespace {

// Exit codes, one per error family.
enum ExitCode {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kIo = 3,
  kContractViolation = 4,
  kTraining = 5,
};

using czsda::KvConfig;

std::string DefaultOutRoot() {
  const char *root = std::getenv("CZSDA_OUT_ROOT");
  return root && *root ? root : "out";
}

void PrintLine(const std::string &line) { std::cout << line << "\n"; }

// --scenario accepts a preset name or a config file path.
czsda::synth::ScenarioConfig ResolveScenario(const std::string &arg) {
  using czsda::synth::ScenarioConfig;
  if (arg.empty() || arg == "default") return ScenarioConfig{};
  if (arg == "distant") {
    ScenarioConfig config;
    config.language_distance = "distant";
    return config;
  }
  if (arg == "cross-domain") {
    ScenarioConfig config;
    config.u_domain = "source";
    return config;
  }
  if (arg == "mild") {
    ScenarioConfig config;
    config.gap = "mild";
    return config;
  }
  if (!std::filesystem::exists(arg)) {
    throw czsda::UsageError("scenario \"" + arg +
                            "\" is neither a preset nor a file");
  }
  return ScenarioConfig::FromKv(KvConfig::FromFile(arg));
}

// Train-config flags mirror config keys one-to-one; file values are
// defaults, flags override.
struct TrainFlags {
  std::map<std::string, std::string> values;

  void Register(CLI::App *cmd) {
    static const char *keys[] = {
        "mode", "seed", "updates_curriculum", "updates_seed",
        "updates_pseudo_label", "updates_sup_xlpt", "updates_finetune", "lr",
        "adam_beta1", "adam_beta2", "adam_eps", "batch_size", "ema_decay",
        "time_mask_prob", "time_mask_span", "channel_mask_prob",
        "channel_mask_span", "mask_fill", "freeze_fraction", "ssl_clusters",
        "kmeans_iters", "head_init_scale", "skip_infeasible", "no_curriculum",
        "continuous_pl", "shared_head", "curriculum_pool", "encoder_layers",
        "hidden_width", "context_radius"};
    for (const char *key : keys) {
      cmd->add_option_function<std::string>(
          "--" + std::string(key),
          [this, key](const std::string &value) { values[key] = value; },
          "train config key " + std::string(key));
    }
  }

  KvConfig Overlay(const std::string &config_path) const {
    KvConfig kv;
    if (!config_path.empty()) kv = KvConfig::FromFile(config_path);
    for (const auto &[key, value] : values) kv.Set(key, value);
    return kv;
  }
};

std::string CorpusStatsTable(const czsda::synth::CorpusLayout &layout) {
  std::string out =
      "split  utterances  language  domain   labeled  frames_total  frames_mean\n";
  for (const std::string split : {"L", "U", "dev", "test"}) {
    const auto entries = czsda::synth::LoadManifest(layout.Manifest(split));
    long frames_total = 0;
    for (const auto &entry : entries) {
      frames_total +=
          czsda::synth::LoadFrames(layout.dir + "/" + entry.relative_path).Rows();
    }
    char line[160];
    std::snprintf(line, sizeof(line), "%-5s  %10zu  %-8s  %-7s  %-7s  %12ld  %11.1f\n",
                  split.c_str(), entries.size(),
                  entries.empty() ? "-" : entries.front().language.c_str(),
                  entries.empty() ? "-" : entries.front().domain.c_str(),
                  entries.empty() || !entries.front().Labeled() ? "no" : "yes",
                  frames_total,
                  entries.empty() ? 0.0
                                  : static_cast<double>(frames_total) /
                                        static_cast<double>(entries.size()));
    out += line;
  }
  return out;
}

int CmdGenData(const std::string &scenario, int seed, const std::string &out) {
  const auto config = ResolveScenario(scenario);
  const auto layout =
      czsda::synth::GenCorpus(config, static_cast<std::uint64_t>(seed), out);
  std::cout << "corpus written to " << layout.dir << "\n"
            << CorpusStatsTable(layout);
  return kOk;
}

int CmdTrain(const TrainFlags &flags, const std::string &config_path,
             const std::string &data_dir, const std::string &out_dir,
             const std::string &sidecar, bool quiet) {
  const KvConfig kv = flags.Overlay(config_path);
  const auto config = czsda::pipeline::TrainConfig::FromKv(kv);
  std::optional<std::string> sidecar_override;
  if (!sidecar.empty()) sidecar_override = sidecar;
  const auto result = czsda::pipeline::RunTraining(
      config, data_dir, out_dir, sidecar_override,
      quiet ? czsda::pipeline::ProgressFn{} : PrintLine);
  std::cout << "final checkpoint: " << result.final_ckpt_path
            << " (config " << config.ConfigHash() << ", skipped "
            << result.TotalSkipped() << ")\n";
  return kOk;
}

// Vocabulary used to print decoded token indices as symbols. The target
// head always speaks the target language's writing system; the source
// head does too in translit mode, so the caller picks the language.
std::vector<std::string> VocabForDecode(const std::string &data_dir,
                                        const std::string &language) {
  const czsda::synth::CorpusLayout layout{data_dir};
  return czsda::synth::LoadVocab(layout.VocabFile(language));
}

int CmdDecode(const std::string &ckpt_path, const std::string &data_dir,
              const std::string &manifest, const std::string &head,
              const std::string &language, const std::string &out_path) {
  const auto ckpt = czsda::model::LoadCheckpoint(ckpt_path);
  const auto corpus = czsda::pipeline::LoadCorpusData(data_dir, manifest);
  const auto decoded =
      czsda::eval::DecodeCorpus(ckpt, corpus, czsda::model::ParseHead(head));
  const auto vocab = VocabForDecode(data_dir, language);
  std::string text;
  for (const auto &utt : decoded) {
    text += utt.id + '\t' +
            czsda::synth::SymbolsFromTokens(vocab, utt.hypothesis) + '\n';
  }
  czsda::io::WriteTextFile(out_path, text);
  std::cout << "decoded " << decoded.size() << " utterances to " << out_path
            << "\n";
  return kOk;
}

int CmdEvaluate(const std::string &ckpt_path, const std::string &data_dir,
                const std::string &manifest, const std::string &head,
                const std::string &out_path) {
  const auto ckpt = czsda::model::LoadCheckpoint(ckpt_path);
  auto report = czsda::eval::Evaluate(ckpt, data_dir, manifest,
                                      czsda::model::ParseHead(head));
  KvConfig kv;
  kv.Set("ckpt", ckpt_path);
  kv.Set("manifest", manifest);
  kv.Set("head", head);
  report.config_hash = czsda::HashHex(kv.Canonical());
  const std::string csv = czsda::eval::EvalReportCsv({report});
  if (!out_path.empty()) czsda::io::WriteTextFile(out_path, csv);
  std::cout << csv;
  return kOk;
}

int CmdBtCtc(const std::string &ckpt_path, const std::string &source_asr_path,
             const std::string &data_dir, const std::string &variant_name,
             int seed, int max_utts, const std::string &out_path) {
  using czsda::eval::BtCtcVariant;
  const BtCtcVariant variant = czsda::eval::ParseVariant(variant_name);
  if (variant == BtCtcVariant::kModel && ckpt_path.empty()) {
    throw czsda::UsageError("--ckpt is required for the model variant");
  }

  const czsda::synth::CorpusLayout layout{data_dir};
  if (!std::filesystem::exists(layout.Sidecar())) {
    throw czsda::UsageError("bt-ctc needs the sidecar " + layout.Sidecar());
  }
  const auto truth =
      czsda::pipeline::LoadCorpusData(data_dir, layout.Sidecar());
  const auto u_entries = czsda::synth::LoadManifest(layout.Manifest("U"));
  if (u_entries.empty()) throw czsda::UsageError("U manifest is empty");

  const auto target_lang = czsda::synth::LoadLanguageSpec(
      layout.LanguageSpecFile("alpha"));
  const auto source_lang = czsda::synth::LoadLanguageSpec(
      layout.LanguageSpecFile("beta"));
  const auto domain = czsda::synth::LoadDomainSpec(
      layout.DomainSpecFile(u_entries.front().domain));

  std::optional<czsda::model::Checkpoint> model_ckpt;
  if (!ckpt_path.empty()) {
    model_ckpt = czsda::model::LoadCheckpoint(ckpt_path);
  }
  const auto source_asr = czsda::model::LoadCheckpoint(source_asr_path);

  auto report = czsda::eval::BtCtc(
      model_ckpt ? &*model_ckpt : nullptr, source_asr, truth, target_lang,
      source_lang, domain, variant,
      czsda::numerics::Rng(static_cast<std::uint64_t>(seed)), max_utts);
  KvConfig kv;
  kv.Set("ckpt", ckpt_path);
  kv.Set("source_asr", source_asr_path);
  kv.Set("variant", variant_name);
  kv.Set("seed", std::to_string(seed));
  report.config_hash = czsda::HashHex(kv.Canonical());
  const std::string csv = czsda::eval::BtCtcCsv({report});
  if (!out_path.empty()) czsda::io::WriteTextFile(out_path, csv);
  std::cout << csv;
  return kOk;
}

int CmdAnalyze(bool cca, bool pca, bool token_freq, const std::string &ckpt_a,
               const std::string &ckpt_b, const std::string &ckpt,
               const std::string &data_dir, const std::string &manifest,
               const std::string &head, int layer, int sample_cap,
               const std::string &out_path) {
  if (static_cast<int>(cca) + static_cast<int>(pca) +
          static_cast<int>(token_freq) != 1) {
    throw czsda::UsageError(
        "analyze needs exactly one of --cca, --pca, --token-freq");
  }
  const auto corpus = czsda::pipeline::LoadCorpusData(data_dir, manifest);
  std::string csv;
  if (cca) {
    if (ckpt_a.empty() || ckpt_b.empty()) {
      throw czsda::UsageError("--cca needs --ckpt-a and --ckpt-b");
    }
    const auto a = czsda::model::LoadCheckpoint(ckpt_a);
    const auto b = czsda::model::LoadCheckpoint(ckpt_b);
    auto report = czsda::eval::CcaSimilarity(
        czsda::eval::CollectActivations(a, corpus),
        czsda::eval::CollectActivations(b, corpus), sample_cap);
    KvConfig kv;
    kv.Set("ckpt_a", ckpt_a);
    kv.Set("ckpt_b", ckpt_b);
    kv.Set("manifest", manifest);
    report.config_hash = czsda::HashHex(kv.Canonical());
    csv = czsda::eval::CcaCsv(report);
  } else if (pca) {
    if (ckpt.empty()) throw czsda::UsageError("--pca needs --ckpt");
    const auto loaded = czsda::model::LoadCheckpoint(ckpt);
    const auto result = czsda::eval::PcaProject(
        loaded, corpus, czsda::model::ParseHead(head), layer);
    csv = czsda::eval::PcaCsv(result);
  } else {
    // Token distribution of transcripts, or of decodes when --ckpt given.
    std::vector<czsda::ctc::TokenSeq> seqs;
    int vocab = 0;
    if (ckpt.empty()) {
      for (const auto &utt : corpus.utterances) {
        if (!utt.labeled) {
          throw czsda::UsageError(
              "token-freq without --ckpt needs a labeled manifest");
        }
        seqs.push_back(utt.tokens);
        vocab = std::max(vocab, utt.tokens.vocab);
      }
    } else {
      const auto loaded = czsda::model::LoadCheckpoint(ckpt);
      const auto head_tag = czsda::model::ParseHead(head);
      vocab = loaded.params.HeadFor(head_tag).Out();
      for (auto &utt :
           czsda::eval::DecodeCorpus(loaded, corpus, head_tag)) {
        seqs.push_back(std::move(utt.hypothesis));
      }
    }
    csv = czsda::eval::TokenDistributionCsv(
        czsda::eval::TokenDistribution(seqs, vocab));
  }
  if (!out_path.empty()) czsda::io::WriteTextFile(out_path, csv);
  std::cout << csv;
  return kOk;
}

int CmdReproduce(const std::string &recipe_path, const std::string &out_dir,
                 int threads_override, bool quiet) {
  czsda::pipeline::Recipe recipe =
      recipe_path.empty()
          ? czsda::pipeline::Recipe::Default()
          : czsda::pipeline::Recipe::FromKv(KvConfig::FromFile(recipe_path));
  if (threads_override > 0) recipe.threads = threads_override;
  const auto result = czsda::pipeline::RunRecipe(
      recipe, out_dir, quiet ? czsda::pipeline::ProgressFn{} : PrintLine);
  std::cout << FormatRecipeResult(result);
  if (!result.AllRunsSucceeded()) {
    throw czsda::TrainingError("one or more runs failed; partial results in " +
                               out_dir + "/reports/summary.csv");
  }
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"transliterated zero-shot domain adaptation for CTC models"};
  app.require_subcommand(1);

  // gen-data
  auto *gen = app.add_subcommand("gen-data", "generate a synthetic corpus");
  std::string gen_scenario = "default";
  int gen_seed = 7;
  std::string gen_out = DefaultOutRoot() + "/data";
  gen->add_option("--scenario", gen_scenario,
                  "preset (default|distant|cross-domain|mild) or config file");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "output directory");

  // train
  auto *train = app.add_subcommand("train", "run a training mode");
  TrainFlags train_flags;
  train_flags.Register(train);
  std::string train_config, train_data, train_out, train_sidecar;
  bool train_quiet = false;
  train->add_option("--config", train_config, "train config file (defaults)");
  train->add_option("--data", train_data, "corpus directory")->required();
  train->add_option("--out", train_out, "checkpoint/log directory");
  train->add_option("--sidecar", train_sidecar,
                    "ground-truth sidecar (supervised modes only)");
  train->add_flag("--quiet", train_quiet, "suppress progress lines");

  // decode
  auto *decode = app.add_subcommand("decode", "greedy-decode a manifest");
  std::string dec_ckpt, dec_data, dec_manifest, dec_out;
  std::string dec_head = "target", dec_language = "alpha";
  decode->add_option("--ckpt", dec_ckpt)->required();
  decode->add_option("--data", dec_data)->required();
  decode->add_option("--manifest", dec_manifest)->required();
  decode->add_option("--head", dec_head, "target|source|ssl");
  decode->add_option("--vocab-language", dec_language,
                     "language whose symbols the head emits");
  decode->add_option("--out", dec_out)->required();

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "CER report on a manifest");
  std::string eval_ckpt, eval_data, eval_manifest, eval_out;
  std::string eval_head = "target";
  evaluate->add_option("--ckpt", eval_ckpt)->required();
  evaluate->add_option("--data", eval_data)->required();
  evaluate->add_option("--manifest", eval_manifest)->required();
  evaluate->add_option("--head", eval_head);
  evaluate->add_option("--out", eval_out, "CSV path (also printed)");

  // bt-ctc
  auto *bt = app.add_subcommand("bt-ctc", "transliteration quality metric");
  std::string bt_ckpt, bt_source_asr, bt_data, bt_out;
  std::string bt_variant = "model";
  int bt_seed = 1, bt_max = 0;
  bt->add_option("--ckpt", bt_ckpt, "transliterating model (model variant)");
  bt->add_option("--source-asr", bt_source_asr)->required();
  bt->add_option("--data", bt_data)->required();
  bt->add_option("--variant", bt_variant, "model|topline|baseline");
  bt->add_option("--seed", bt_seed, "synthesis seed");
  bt->add_option("--max-utts", bt_max, "cap scored utterances (0 = all)");
  bt->add_option("--out", bt_out);

  // analyze
  auto *analyze = app.add_subcommand("analyze", "CCA / PCA / token stats");
  bool an_cca = false, an_pca = false, an_freq = false;
  std::string an_ckpt_a, an_ckpt_b, an_ckpt, an_data, an_manifest, an_out;
  std::string an_head = "target";
  int an_layer = -1, an_cap = 4096;
  analyze->add_flag("--cca", an_cca, "CCA similarity between two checkpoints");
  analyze->add_flag("--pca", an_pca, "2-D PCA projection export");
  analyze->add_flag("--token-freq", an_freq, "token frequency table");
  analyze->add_option("--ckpt-a", an_ckpt_a);
  analyze->add_option("--ckpt-b", an_ckpt_b);
  analyze->add_option("--ckpt", an_ckpt);
  analyze->add_option("--data", an_data)->required();
  analyze->add_option("--manifest", an_manifest)->required();
  analyze->add_option("--head", an_head);
  analyze->add_option("--layer", an_layer, "encoder layer (-1 = last)");
  analyze->add_option("--sample-cap", an_cap, "CCA frame cap");
  analyze->add_option("--out", an_out);

  // reproduce
  auto *reproduce = app.add_subcommand(
      "reproduce", "run a (mode x seed) recipe and compare orderings");
  std::string rep_recipe, rep_out = DefaultOutRoot() + "/reproduce";
  int rep_threads = 0;
  bool rep_quiet = false;
  reproduce->add_option("--recipe", rep_recipe, "recipe file (default recipe when absent)");
  reproduce->add_option("--out", rep_out, "output directory");
  reproduce->add_option("--threads", rep_threads, "parallel run bound");
  reproduce->add_flag("--quiet", rep_quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return CmdGenData(gen_scenario, gen_seed, gen_out);
    if (train->parsed()) {
      if (train_out.empty()) train_out = DefaultOutRoot() + "/ckpt";
      return CmdTrain(train_flags, train_config, train_data, train_out,
                      train_sidecar, train_quiet);
    }
    if (decode->parsed()) {
      return CmdDecode(dec_ckpt, dec_data, dec_manifest, dec_head,
                       dec_language, dec_out);
    }
    if (evaluate->parsed()) {
      return CmdEvaluate(eval_ckpt, eval_data, eval_manifest, eval_head,
                         eval_out);
    }
    if (bt->parsed()) {
      return CmdBtCtc(bt_ckpt, bt_source_asr, bt_data, bt_variant, bt_seed,
                      bt_max, bt_out);
    }
    if (analyze->parsed()) {
      return CmdAnalyze(an_cca, an_pca, an_freq, an_ckpt_a, an_ckpt_b, an_ckpt,
                        an_data, an_manifest, an_head, an_layer, an_cap,
                        an_out);
    }
    if (reproduce->parsed()) {
      return CmdReproduce(rep_recipe, rep_out, rep_threads, rep_quiet);
    }
    throw czsda::UsageError("no subcommand");
  } catch (const czsda::UsageError &err) {
    std::cerr << "czsda: " << err.what() << "\n";
    return kUsage;
  } catch (const czsda::ContractViolationError &err) {
    std::cerr << "czsda: " << err.what() << "\n";
    return kContractViolation;
  } catch (const czsda::IoError &err) {
    std::cerr << "czsda: " << err.what() << "\n";
    return kIo;
  } catch (const czsda::TrainingError &err) {
    std::cerr << "czsda: " << err.what() << "\n";
    return kTraining;
  } catch (const czsda::ConfigError &err) {
    std::cerr << "czsda: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception &err) {
    std::cerr << "czsda: unexpected error: " << err.what() << "\n";
    return kUnexpected;
  }
}
