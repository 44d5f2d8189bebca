// czsda/ctc/decode.cc

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

#include "czsda/ctc/ctc.h"

namespace czsda {
namespace ctc {

std::vector<int> FrameArgmax(const numerics::Matrix &logits) {
  std::vector<int> best(logits.Rows(), 0);
  for (int t = 0; t < logits.Rows(); ++t) {
    const double *row = logits.RowData(t);
    int arg = 0;
    for (int j = 1; j < logits.Cols(); ++j) {
      if (row[j] > row[arg]) arg = j;  // strict: ties keep the lowest index
    }
    best[t] = arg;
  }
  return best;
}

TokenSeq GreedyDecode(const LogitSeq &logits) {
  const std::vector<int> best = FrameArgmax(logits.values);
  TokenSeq out;
  out.vocab = logits.Vocab();
  for (std::size_t t = 0; t < best.size(); ++t) {
    if (t > 0 && best[t] == best[t - 1]) continue;
    if (best[t] != kBlank) out.tokens.push_back(best[t]);
  }
  return out;
}

EditStats Levenshtein(const TokenSeq &ref, const TokenSeq &hyp) {
  const int m = ref.Length();
  const int n = hyp.Length();

  EditStats stats;
  if (m == 0) {
    stats.insertions = n;
    stats.degenerate_reference = n > 0;
    stats.error_rate = 100.0 * n;
    return stats;
  }

  // Cell = (total edits, substitutions); minimize total, then maximize
  // substitutions. Both objectives are additive along the alignment, so
  // the lexicographic optimum is a valid DP. Given the total and S, the
  // indel split is forced by D - I = |ref| - |hyp|.
  struct Cell {
    int total;
    int subs;
  };
  auto better = [](const Cell &a, const Cell &b) {
    if (a.total != b.total) return a.total < b.total;
    return a.subs > b.subs;
  };

  std::vector<Cell> prev(n + 1), cur(n + 1);
  for (int j = 0; j <= n; ++j) prev[j] = {j, 0};
  for (int i = 1; i <= m; ++i) {
    cur[0] = {i, 0};
    for (int j = 1; j <= n; ++j) {
      const int sub_cost = ref.tokens[i - 1] == hyp.tokens[j - 1] ? 0 : 1;
      Cell best = {prev[j - 1].total + sub_cost, prev[j - 1].subs + sub_cost};
      const Cell del = {prev[j].total + 1, prev[j].subs};
      const Cell ins = {cur[j - 1].total + 1, cur[j - 1].subs};
      if (better(del, best)) best = del;
      if (better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }

  const int total = prev[n].total;
  const int subs = prev[n].subs;
  const int indels = total - subs;
  // D - I = m - n and D + I = indels.
  stats.substitutions = subs;
  stats.deletions = (indels + (m - n)) / 2;
  stats.insertions = (indels - (m - n)) / 2;
  stats.error_rate = 100.0 * static_cast<double>(total) / m;
  return stats;
}

}  // namespace ctc
}  // namespace czsda
