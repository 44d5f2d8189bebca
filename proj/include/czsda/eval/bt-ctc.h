// czsda/eval/bt-ctc.h

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

#ifndef CZSDA_EVAL_BT_CTC_H_
#define CZSDA_EVAL_BT_CTC_H_

#include <string>
#include <vector>

#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/data.h"
#include "czsda/synthlang/language.h"

namespace czsda {
namespace eval {

// Back-transliterated CTC quality metric. Per source-language utterance
// with ground truth y:
//   model     transliterate x with the model under test (greedy, target
//             head), synthesize the transliteration with the TARGET
//             language synthesizer, score CTC(y, source-ASR(x_hat))
//   topline   synthesize y itself with the SOURCE synthesizer and score
//             against y (matched pair)
//   baseline  topline synthesis scored against a permuted reference
//             (mismatched pairs)
// Empty transliterations and CTC-infeasible pairs are skipped and
// counted, not averaged.
enum class BtCtcVariant { kModel, kTopline, kBaseline };

std::string VariantName(BtCtcVariant variant);
BtCtcVariant ParseVariant(const std::string &name);

struct BtCtcReport {
  std::string variant;
  double mean_loss = 0.0;
  int scored = 0;
  int skipped = 0;
  std::string config_hash;
};

// |truth| is the loaded sidecar corpus (frames plus true transcripts).
// |model_ckpt| may be null for the topline and baseline variants. The
// synthesis domain is the one the source ASR was trained in.
BtCtcReport BtCtc(const model::Checkpoint *model_ckpt,
                  const model::Checkpoint &source_asr,
                  const pipeline::LoadedCorpus &truth,
                  const synth::LanguageSpec &target_lang,
                  const synth::LanguageSpec &source_lang,
                  const synth::DomainSpec &domain, BtCtcVariant variant,
                  numerics::Rng rng, int max_utterances = 0);

// CSV: variant,mean_ctc,scored,skipped,config
std::string BtCtcCsv(const std::vector<BtCtcReport> &reports);

}  // namespace eval
}  // namespace czsda

#endif  // CZSDA_EVAL_BT_CTC_H_
