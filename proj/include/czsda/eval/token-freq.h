// czsda/eval/token-freq.h

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

#ifndef CZSDA_EVAL_TOKEN_FREQ_H_
#define CZSDA_EVAL_TOKEN_FREQ_H_

#include <string>
#include <vector>

#include "czsda/ctc/ctc.h"

namespace czsda {
namespace eval {

// Normalized frequency of each non-blank token over a set of sequences.
// Index k of the result is token k's share; index 0 (blank) stays 0.
// Frequencies sum to 1 (within rounding) unless the input is empty.
std::vector<double> TokenDistribution(const std::vector<ctc::TokenSeq> &seqs,
                                      int vocab);

// Half the L1 distance between two distributions over the same vocab.
double TotalVariation(const std::vector<double> &p,
                      const std::vector<double> &q);

// CSV: token,frequency (one row per non-blank token index).
std::string TokenDistributionCsv(const std::vector<double> &freq);

}  // namespace eval
}  // namespace czsda

#endif  // CZSDA_EVAL_TOKEN_FREQ_H_
