// czsda/ctc/ctc.h

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

#ifndef CZSDA_CTC_CTC_H_
#define CZSDA_CTC_CTC_H_

#include <cstdint>
#include <vector>

#include "czsda/numerics/matrix.h"

namespace czsda {
namespace ctc {

// Index 0 is the blank everywhere: model heads, decoders, synthesized
// corpora. Real tokens live in [1, vocab-1].
constexpr int kBlank = 0;

// A label sequence without blanks. |vocab| is the full vocabulary size
// including the blank; 0 means "not stated" (range checks skipped).
struct TokenSeq {
  std::vector<int> tokens;
  int vocab = 0;

  bool Empty() const { return tokens.empty(); }
  int Length() const { return static_cast<int>(tokens.size()); }
  bool operator==(const TokenSeq &other) const { return tokens == other.tokens; }
};

// Unnormalized per-frame scores, one row per frame, one column per
// vocabulary entry (blank included).
struct LogitSeq {
  numerics::Matrix values;  // T×V

  int Frames() const { return values.Rows(); }
  int Vocab() const { return values.Cols(); }
};

// Shortest frame count that can emit |target|: one frame per token plus
// a separating blank between adjacent equal tokens.
int MinFrames(const TokenSeq &target);

struct CtcResult {
  double loss = 0.0;           // -log P(target | logits), >= 0
  numerics::Matrix grad;       // T×V, d loss / d logits
};

// CTC loss and gradient by the forward-backward recursion over the
// blank-extended label sequence, entirely in log space (Graves 2006,
// ch. 7). The gradient maps the state posterior through the per-frame
// softmax: d loss / d logit(t,k) = softmax_t(k) - Q_t(k), with Q_t the
// posterior mass of states labeled k at frame t.
// Throws InfeasibleTargetError when Frames() < MinFrames(target).
CtcResult CtcLoss(const LogitSeq &logits, const TokenSeq &target);

// Loss only (no gradient buffers); same recursion, used in decoding-
// heavy paths like BT-CTC scoring.
double CtcLossValue(const LogitSeq &logits, const TokenSeq &target);

// Test oracle: enumerate every V^T alignment path, collapse it (merge
// repeats, then drop blanks) and sum the probabilities of paths that
// collapse to |target|. Throws SizeError if V^T > 10^7 and
// InfeasibleTargetError when no path matches.
double BruteForceCtc(const LogitSeq &logits, const TokenSeq &target);

// Per-frame argmax (ties break to the lowest index), merge adjacent
// equal tokens, remove blanks.
TokenSeq GreedyDecode(const LogitSeq &logits);

// Row-wise argmax labels, used for tagging activation frames.
std::vector<int> FrameArgmax(const numerics::Matrix &logits);

struct EditStats {
  std::int64_t substitutions = 0;
  std::int64_t deletions = 0;
  std::int64_t insertions = 0;
  // (S+D+I) / |ref| * 100. Empty ref with empty hyp scores 0; empty ref
  // with nonempty hyp scores 100*|hyp| and sets degenerate_reference.
  double error_rate = 0.0;
  bool degenerate_reference = false;

  std::int64_t TotalEdits() const {
    return substitutions + deletions + insertions;
  }
};

// Unit-cost edit distance. Among minimum-cost alignments the one with
// the most substitutions (equivalently fewest indels) is reported,
// which makes the S/D/I split symmetric: swapping ref and hyp keeps S
// and exchanges D with I.
EditStats Levenshtein(const TokenSeq &ref, const TokenSeq &hyp);

}  // namespace ctc
}  // namespace czsda

#endif  // CZSDA_CTC_CTC_H_
