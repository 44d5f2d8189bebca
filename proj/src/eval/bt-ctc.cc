// czsda/eval/bt-ctc.cc

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

#include "czsda/eval/bt-ctc.h"

#include <cstdio>

#include "czsda/base/error.h"

namespace czsda {
namespace eval {

std::string VariantName(BtCtcVariant variant) {
  switch (variant) {
    case BtCtcVariant::kModel: return "model";
    case BtCtcVariant::kTopline: return "topline";
    case BtCtcVariant::kBaseline: return "baseline";
  }
  return "?";
}

BtCtcVariant ParseVariant(const std::string &name) {
  if (name == "model") return BtCtcVariant::kModel;
  if (name == "topline") return BtCtcVariant::kTopline;
  if (name == "baseline") return BtCtcVariant::kBaseline;
  throw UsageError("unknown bt-ctc variant \"" + name + "\"");
}

BtCtcReport BtCtc(const model::Checkpoint *model_ckpt,
                  const model::Checkpoint &source_asr,
                  const pipeline::LoadedCorpus &truth,
                  const synth::LanguageSpec &target_lang,
                  const synth::LanguageSpec &source_lang,
                  const synth::DomainSpec &domain, BtCtcVariant variant,
                  numerics::Rng rng, int max_utterances) {
  if (variant == BtCtcVariant::kModel && model_ckpt == nullptr) {
    throw UsageError("bt-ctc model variant needs the transliterating model");
  }
  const int count =
      max_utterances > 0
          ? std::min<int>(max_utterances, truth.Size())
          : truth.Size();
  if (count == 0) throw UsageError("bt-ctc needs a non-empty sidecar corpus");
  for (int i = 0; i < count; ++i) {
    if (!truth.utterances[i].labeled) {
      throw UsageError("bt-ctc sidecar row " + truth.utterances[i].id +
                       " lacks ground truth");
    }
  }

  // Mismatched references for the baseline: a seeded shuffle.
  std::vector<int> reference_of(count);
  for (int i = 0; i < count; ++i) reference_of[i] = i;
  if (variant == BtCtcVariant::kBaseline) {
    numerics::Rng perm = rng.Split(0xBA5E);
    for (int i = count - 1; i > 0; --i) {
      std::swap(reference_of[i], reference_of[perm.UniformInt(i + 1)]);
    }
  }

  BtCtcReport report;
  report.variant = VariantName(variant);
  double loss_sum = 0.0;
  for (int i = 0; i < count; ++i) {
    const pipeline::LoadedUtterance &utt = truth.utterances[i];
    numerics::Rng synth_rng = rng.Split(static_cast<std::uint64_t>(i));

    numerics::Matrix synthesized;
    if (variant == BtCtcVariant::kModel) {
      const model::ForwardTrace trace =
          Forward(model_ckpt->params, utt.frames, model::Head::kTarget);
      const ctc::TokenSeq translit = ctc::GreedyDecode(trace.Logits());
      if (translit.Empty()) {
        ++report.skipped;
        continue;
      }
      synthesized = Synthesize(target_lang, translit, domain, &synth_rng);
    } else {
      synthesized = Synthesize(source_lang, utt.tokens, domain, &synth_rng);
    }

    const ctc::TokenSeq &reference = truth.utterances[reference_of[i]].tokens;
    const model::ForwardTrace scored =
        Forward(source_asr.params, synthesized, model::Head::kSource);
    if (scored.logits.Rows() < ctc::MinFrames(reference)) {
      ++report.skipped;
      continue;
    }
    loss_sum += ctc::CtcLossValue(scored.Logits(), reference);
    ++report.scored;
  }
  if (report.scored > 0) report.mean_loss = loss_sum / report.scored;
  return report;
}

std::string BtCtcCsv(const std::vector<BtCtcReport> &reports) {
  std::string csv = "variant,mean_ctc,scored,skipped,config\n";
  for (const BtCtcReport &report : reports) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s,%.6f,%d,%d,%s\n",
                  report.variant.c_str(), report.mean_loss, report.scored,
                  report.skipped, report.config_hash.c_str());
    csv += line;
  }
  return csv;
}

}  // namespace eval
}  // namespace czsda
