// czsda/pipeline/train-config.cc

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

#include "czsda/pipeline/train-config.h"

#include "czsda/base/error.h"

namespace czsda {
namespace pipeline {

std::string ModeName(Mode mode) {
  switch (mode) {
    case Mode::kScratch: return "scratch";
    case Mode::kSslZsda: return "ssl-zsda";
    case Mode::kTranslitZsda: return "translit-zsda";
    case Mode::kSupZsda: return "sup-zsda";
    case Mode::kSupZsdaCurriculum: return "sup-zsda-curriculum";
    case Mode::kSourceAsr: return "source-asr";
  }
  return "?";
}

Mode ParseMode(const std::string &name) {
  if (name == "scratch") return Mode::kScratch;
  if (name == "ssl-zsda") return Mode::kSslZsda;
  if (name == "translit-zsda") return Mode::kTranslitZsda;
  if (name == "sup-zsda") return Mode::kSupZsda;
  if (name == "sup-zsda-curriculum") return Mode::kSupZsdaCurriculum;
  if (name == "source-asr") return Mode::kSourceAsr;
  throw UsageError("unknown mode \"" + name + "\"");
}

namespace {

std::string PoolName(CurriculumPool pool) {
  switch (pool) {
    case CurriculumPool::kBoth: return "both";
    case CurriculumPool::kLabeledOnly: return "l-only";
    case CurriculumPool::kUnlabeledOnly: return "u-only";
  }
  return "?";
}

CurriculumPool ParsePool(const std::string &name) {
  if (name == "both") return CurriculumPool::kBoth;
  if (name == "l-only") return CurriculumPool::kLabeledOnly;
  if (name == "u-only") return CurriculumPool::kUnlabeledOnly;
  throw ConfigError("curriculum_pool must be both, l-only or u-only");
}

struct Schedule {
  int curriculum, seed, pseudo_label, sup_xlpt, finetune;
};

Schedule DefaultSchedule(Mode mode) {
  switch (mode) {
    case Mode::kScratch: return {0, 0, 0, 0, 7000};
    case Mode::kSslZsda: return {5000, 0, 0, 0, 2000};
    case Mode::kTranslitZsda: return {2000, 1000, 2000, 0, 2000};
    case Mode::kSupZsda: return {0, 0, 0, 5000, 2000};
    case Mode::kSupZsdaCurriculum: return {2000, 0, 0, 3000, 2000};
    case Mode::kSourceAsr: return {0, 0, 0, 0, 3000};
  }
  return {0, 0, 0, 0, 0};
}

}  // namespace

TrainConfig TrainConfig::FromKv(const KvConfig &kv) {
  TrainConfig config;
  config.mode = ParseMode(kv.GetString("mode", "translit-zsda"));
  config.seed = static_cast<std::uint64_t>(kv.GetInt("seed", 1));

  const Schedule schedule = DefaultSchedule(config.mode);
  config.updates_curriculum = kv.GetInt("updates_curriculum", schedule.curriculum);
  config.updates_seed = kv.GetInt("updates_seed", schedule.seed);
  config.updates_pseudo_label = kv.GetInt("updates_pseudo_label", schedule.pseudo_label);
  config.updates_sup_xlpt = kv.GetInt("updates_sup_xlpt", schedule.sup_xlpt);
  config.updates_finetune = kv.GetInt("updates_finetune", schedule.finetune);

  config.lr = kv.GetDouble("lr", config.lr);
  config.adam_beta1 = kv.GetDouble("adam_beta1", config.adam_beta1);
  config.adam_beta2 = kv.GetDouble("adam_beta2", config.adam_beta2);
  config.adam_eps = kv.GetDouble("adam_eps", config.adam_eps);
  config.batch_size = kv.GetInt("batch_size", config.batch_size);

  config.ema_decay = kv.GetDouble("ema_decay", config.ema_decay);
  config.mask.time_mask_prob = kv.GetDouble("time_mask_prob", config.mask.time_mask_prob);
  config.mask.time_span = kv.GetInt("time_mask_span", config.mask.time_span);
  config.mask.channel_mask_prob =
      kv.GetDouble("channel_mask_prob", config.mask.channel_mask_prob);
  config.mask.channel_span = kv.GetInt("channel_mask_span", config.mask.channel_span);
  config.mask.fill_value = kv.GetDouble("mask_fill", config.mask.fill_value);

  config.freeze_fraction = kv.GetDouble("freeze_fraction", config.freeze_fraction);
  config.ssl_clusters = kv.GetInt("ssl_clusters", config.ssl_clusters);
  config.kmeans_iters = kv.GetInt("kmeans_iters", config.kmeans_iters);
  config.head_init_scale = kv.GetDouble("head_init_scale", config.head_init_scale);

  config.skip_infeasible = kv.GetBool("skip_infeasible", config.skip_infeasible);
  config.no_curriculum = kv.GetBool("no_curriculum", config.no_curriculum);
  config.continuous_pl = kv.GetBool("continuous_pl", config.continuous_pl);
  config.shared_head = kv.GetBool("shared_head", config.shared_head);
  config.curriculum_pool = ParsePool(kv.GetString("curriculum_pool", "both"));

  config.encoder_layers = kv.GetInt("encoder_layers", config.encoder_layers);
  config.hidden_width = kv.GetInt("hidden_width", config.hidden_width);
  config.context_radius = kv.GetInt("context_radius", config.context_radius);
  kv.CheckAllConsumed("train config");

  // The no-curriculum ablation keeps the pre-training budget: its
  // curriculum updates move into the seeding stage.
  if (config.no_curriculum && config.mode == Mode::kTranslitZsda) {
    config.updates_seed += config.updates_curriculum;
    config.updates_curriculum = 0;
  }

  // Modes that lack a stage force that stage to zero updates.
  const Schedule mask_sched = DefaultSchedule(config.mode);
  if (mask_sched.curriculum == 0) config.updates_curriculum = 0;
  if (mask_sched.seed == 0) config.updates_seed = 0;
  if (mask_sched.pseudo_label == 0) config.updates_pseudo_label = 0;
  if (mask_sched.sup_xlpt == 0) config.updates_sup_xlpt = 0;

  if (config.updates_curriculum < 0 || config.updates_seed < 0 ||
      config.updates_pseudo_label < 0 || config.updates_sup_xlpt < 0 ||
      config.updates_finetune < 0) {
    throw ConfigError("stage update counts must be >= 0");
  }
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (config.lr <= 0.0) throw ConfigError("lr must be positive");
  if (config.ema_decay <= 0.0 || config.ema_decay >= 1.0) {
    throw ConfigError("ema_decay must lie inside (0, 1)");
  }
  if (config.freeze_fraction < 0.0 || config.freeze_fraction > 1.0) {
    throw ConfigError("freeze_fraction must lie in [0, 1]");
  }
  if (config.mode == Mode::kScratch) config.freeze_fraction = 0.0;
  return config;
}

KvConfig TrainConfig::ToKv() const {
  KvConfig kv;
  kv.Set("mode", ModeName(mode));
  kv.Set("seed", std::to_string(seed));
  kv.Set("updates_curriculum", std::to_string(updates_curriculum));
  kv.Set("updates_seed", std::to_string(updates_seed));
  kv.Set("updates_pseudo_label", std::to_string(updates_pseudo_label));
  kv.Set("updates_sup_xlpt", std::to_string(updates_sup_xlpt));
  kv.Set("updates_finetune", std::to_string(updates_finetune));
  kv.Set("lr", std::to_string(lr));
  kv.Set("adam_beta1", std::to_string(adam_beta1));
  kv.Set("adam_beta2", std::to_string(adam_beta2));
  kv.Set("adam_eps", std::to_string(adam_eps));
  kv.Set("batch_size", std::to_string(batch_size));
  kv.Set("ema_decay", std::to_string(ema_decay));
  kv.Set("time_mask_prob", std::to_string(mask.time_mask_prob));
  kv.Set("time_mask_span", std::to_string(mask.time_span));
  kv.Set("channel_mask_prob", std::to_string(mask.channel_mask_prob));
  kv.Set("channel_mask_span", std::to_string(mask.channel_span));
  kv.Set("mask_fill", std::to_string(mask.fill_value));
  kv.Set("freeze_fraction", std::to_string(freeze_fraction));
  kv.Set("ssl_clusters", std::to_string(ssl_clusters));
  kv.Set("kmeans_iters", std::to_string(kmeans_iters));
  kv.Set("head_init_scale", std::to_string(head_init_scale));
  kv.Set("skip_infeasible", skip_infeasible ? "true" : "false");
  kv.Set("no_curriculum", no_curriculum ? "true" : "false");
  kv.Set("continuous_pl", continuous_pl ? "true" : "false");
  kv.Set("shared_head", shared_head ? "true" : "false");
  kv.Set("curriculum_pool", PoolName(curriculum_pool));
  kv.Set("encoder_layers", std::to_string(encoder_layers));
  kv.Set("hidden_width", std::to_string(hidden_width));
  kv.Set("context_radius", std::to_string(context_radius));
  return kv;
}

std::string TrainConfig::ConfigHash() const {
  return HashHex(ToKv().Canonical());
}

}  // namespace pipeline
}  // namespace czsda
