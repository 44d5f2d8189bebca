// czsda/ctc/brute-force.cc

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

#include <cmath>
#include <vector>

#include "czsda/base/error.h"
#include "czsda/ctc/ctc.h"

namespace czsda {
namespace ctc {

// Exhaustive reference for CtcLoss: walks all V^T paths with an
// odometer, collapses each path and accumulates matching probabilities
// in the linear domain. Deliberately has nothing in common with the
// forward-backward implementation.
double BruteForceCtc(const LogitSeq &logits, const TokenSeq &target) {
  const int frames = logits.Frames();
  const int vocab = logits.Vocab();
  if (vocab < 2 || frames < 1) {
    throw ShapeError("brute-force ctc needs T >= 1, V >= 2");
  }
  double total_paths = std::pow(static_cast<double>(vocab), frames);
  if (total_paths > 1e7) {
    throw SizeError("V^T = " + std::to_string(total_paths) +
                    " exceeds the 1e7 enumeration bound");
  }
  for (int token : target.tokens) {
    if (token < 1 || token >= vocab) {
      throw VocabError("target token " + std::to_string(token) +
                       " outside vocabulary");
    }
  }

  const numerics::Matrix logp = numerics::LogSoftmaxRows(logits.values);

  std::vector<int> path(frames, 0);
  std::vector<int> collapsed;
  collapsed.reserve(frames);
  double prob_sum = 0.0;
  while (true) {
    // Merge adjacent repeats first, then drop blanks.
    collapsed.clear();
    for (int t = 0; t < frames; ++t) {
      if (t > 0 && path[t] == path[t - 1]) continue;
      if (path[t] != kBlank) collapsed.push_back(path[t]);
    }
    if (collapsed == target.tokens) {
      double lp = 0.0;
      for (int t = 0; t < frames; ++t) lp += logp(t, path[t]);
      prob_sum += std::exp(lp);
    }

    int pos = frames - 1;
    while (pos >= 0 && path[pos] == vocab - 1) {
      path[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++path[pos];
  }

  if (prob_sum <= 0.0) {
    throw InfeasibleTargetError("no alignment path collapses to the target");
  }
  return -std::log(prob_sum);
}

}  // namespace ctc
}  // namespace czsda
