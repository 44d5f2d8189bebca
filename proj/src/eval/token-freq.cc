// czsda/eval/token-freq.cc

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

#include "czsda/eval/token-freq.h"

#include <cmath>
#include <cstdio>

#include "czsda/base/error.h"

namespace czsda {
namespace eval {

std::vector<double> TokenDistribution(const std::vector<ctc::TokenSeq> &seqs,
                                      int vocab) {
  if (vocab < 2) throw UsageError("token distribution needs vocab >= 2");
  std::vector<std::int64_t> counts(vocab, 0);
  std::int64_t total = 0;
  for (const ctc::TokenSeq &seq : seqs) {
    for (int token : seq.tokens) {
      if (token < 1 || token >= vocab) {
        throw VocabError("token " + std::to_string(token) +
                         " outside the declared vocabulary");
      }
      ++counts[token];
      ++total;
    }
  }
  std::vector<double> freq(vocab, 0.0);
  if (total == 0) return freq;
  for (int k = 1; k < vocab; ++k) {
    freq[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return freq;
}

double TotalVariation(const std::vector<double> &p,
                      const std::vector<double> &q) {
  if (p.size() != q.size()) {
    throw ShapeError("total variation over mismatched vocabularies");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += std::fabs(p[k] - q[k]);
  return 0.5 * acc;
}

std::string TokenDistributionCsv(const std::vector<double> &freq) {
  std::string csv = "token,frequency\n";
  for (std::size_t k = 1; k < freq.size(); ++k) {
    char line[64];
    std::snprintf(line, sizeof(line), "%zu,%.8f\n", k, freq[k]);
    csv += line;
  }
  return csv;
}

}  // namespace eval
}  // namespace czsda
