// czsda/eval/evaluate.h

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

#ifndef CZSDA_EVAL_EVALUATE_H_
#define CZSDA_EVAL_EVALUATE_H_

#include <string>
#include <vector>

#include "czsda/model/checkpoint.h"
#include "czsda/pipeline/data.h"

namespace czsda {
namespace eval {

// Corpus-level error accounting: rate = 100 * (S+D+I) / total reference
// tokens, accumulated over utterances, so it is invariant to manifest
// row order.
struct EvalReport {
  std::string corpus_id;
  int utterances = 0;
  std::int64_t ref_tokens = 0;
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  double error_rate = 0.0;
  std::string config_hash;  // producing config, filled by the caller

  std::int64_t TotalEdits() const {
    return substitutions + deletions + insertions;
  }
};

// Greedy-decode every utterance of a labeled manifest with the chosen
// head and accumulate edit counts. Throws UsageError on unlabeled rows.
EvalReport Evaluate(const model::Checkpoint &ckpt,
                    const std::string &corpus_dir,
                    const std::string &manifest_path, model::Head head);

// Same pass over an already loaded corpus.
EvalReport EvaluateCorpus(const model::Checkpoint &ckpt,
                          const pipeline::LoadedCorpus &corpus,
                          model::Head head);

struct DecodedUtterance {
  std::string id;
  ctc::TokenSeq hypothesis;
};

// Decodes without scoring; works on unlabeled manifests too.
std::vector<DecodedUtterance> DecodeCorpus(const model::Checkpoint &ckpt,
                                           const pipeline::LoadedCorpus &corpus,
                                           model::Head head);

// CSV: corpus,utterances,ref_tokens,substitutions,deletions,insertions,
// error_rate,config
std::string EvalReportCsv(const std::vector<EvalReport> &reports);

}  // namespace eval
}  // namespace czsda

#endif  // CZSDA_EVAL_EVALUATE_H_
