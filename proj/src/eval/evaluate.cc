// czsda/eval/evaluate.cc

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

#include "czsda/eval/evaluate.h"

#include <cstdio>

#include "czsda/base/error.h"

namespace czsda {
namespace eval {

EvalReport EvaluateCorpus(const model::Checkpoint &ckpt,
                          const pipeline::LoadedCorpus &corpus,
                          model::Head head) {
  EvalReport report;
  report.corpus_id = corpus.manifest_path;
  for (const pipeline::LoadedUtterance &utt : corpus.utterances) {
    if (!utt.labeled) {
      throw UsageError("evaluate needs a labeled manifest; utterance " +
                       utt.id + " has no transcript");
    }
    const model::ForwardTrace trace = Forward(ckpt.params, utt.frames, head);
    const ctc::TokenSeq hyp = ctc::GreedyDecode(trace.Logits());
    const ctc::EditStats stats = ctc::Levenshtein(utt.tokens, hyp);
    report.substitutions += stats.substitutions;
    report.deletions += stats.deletions;
    report.insertions += stats.insertions;
    report.ref_tokens += utt.tokens.Length();
    ++report.utterances;
  }
  if (report.ref_tokens > 0) {
    report.error_rate =
        100.0 * static_cast<double>(report.TotalEdits()) / report.ref_tokens;
  }
  return report;
}

EvalReport Evaluate(const model::Checkpoint &ckpt, const std::string &corpus_dir,
                    const std::string &manifest_path, model::Head head) {
  const pipeline::LoadedCorpus corpus =
      pipeline::LoadCorpusData(corpus_dir, manifest_path);
  return EvaluateCorpus(ckpt, corpus, head);
}

std::vector<DecodedUtterance> DecodeCorpus(const model::Checkpoint &ckpt,
                                           const pipeline::LoadedCorpus &corpus,
                                           model::Head head) {
  std::vector<DecodedUtterance> decoded;
  decoded.reserve(corpus.utterances.size());
  for (const pipeline::LoadedUtterance &utt : corpus.utterances) {
    const model::ForwardTrace trace = Forward(ckpt.params, utt.frames, head);
    decoded.push_back({utt.id, ctc::GreedyDecode(trace.Logits())});
  }
  return decoded;
}

std::string EvalReportCsv(const std::vector<EvalReport> &reports) {
  std::string csv =
      "corpus,utterances,ref_tokens,substitutions,deletions,insertions,"
      "error_rate,config\n";
  for (const EvalReport &report : reports) {
    char line[512];
    std::snprintf(line, sizeof(line), "%s,%d,%lld,%lld,%lld,%lld,%.4f,%s\n",
                  report.corpus_id.c_str(), report.utterances,
                  static_cast<long long>(report.ref_tokens),
                  static_cast<long long>(report.substitutions),
                  static_cast<long long>(report.deletions),
                  static_cast<long long>(report.insertions), report.error_rate,
                  report.config_hash.c_str());
    csv += line;
  }
  return csv;
}

}  // namespace eval
}  // namespace czsda
