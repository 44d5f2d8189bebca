// czsda/ctc/ctc-loss.cc

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

#include <algorithm>
#include <cmath>
#include <limits>

#include "czsda/base/error.h"
#include "czsda/ctc/ctc.h"

namespace czsda {
namespace ctc {

namespace {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

using numerics::LogAdd;
using numerics::Matrix;

void ValidateTarget(const TokenSeq &target, int vocab) {
  for (int token : target.tokens) {
    if (token < 1 || token >= vocab) {
      throw VocabError("ctc target token " + std::to_string(token) +
                       " outside [1, " + std::to_string(vocab - 1) + "]");
    }
  }
  if (target.vocab != 0 && target.vocab != vocab) {
    throw VocabError("ctc target declares vocab " +
                     std::to_string(target.vocab) + " but logits have " +
                     std::to_string(vocab));
  }
}

// Blank-extended labels: blank, y1, blank, y2, ..., blank.
std::vector<int> ExtendedLabels(const TokenSeq &target) {
  std::vector<int> ext(2 * target.tokens.size() + 1, kBlank);
  for (std::size_t i = 0; i < target.tokens.size(); ++i) {
    ext[2 * i + 1] = target.tokens[i];
  }
  return ext;
}

struct Lattice {
  Matrix alpha;  // T×U, emission at t included
  Matrix beta;   // T×U, emission at t included
  double log_prob = kLogZero;
};

// alpha(t,u): log-sum over path prefixes ending in extended state u at
// frame t. beta(t,u): log-sum over suffixes starting at u, also
// including frame t's emission, so alpha+beta counts the emission at t
// twice and the posterior divides one copy out.
Lattice ForwardBackward(const Matrix &logp, const std::vector<int> &ext) {
  const int frames = logp.Rows();
  const int states = static_cast<int>(ext.size());
  Lattice lat;
  lat.alpha = Matrix(frames, states);
  lat.beta = Matrix(frames, states);
  lat.alpha.Fill(kLogZero);
  lat.beta.Fill(kLogZero);

  auto allow_skip = [&ext](int u) {
    return u >= 2 && ext[u] != kBlank && ext[u] != ext[u - 2];
  };

  lat.alpha(0, 0) = logp(0, ext[0]);
  if (states > 1) lat.alpha(0, 1) = logp(0, ext[1]);
  for (int t = 1; t < frames; ++t) {
    for (int u = 0; u < states; ++u) {
      double acc = lat.alpha(t - 1, u);
      if (u >= 1) acc = LogAdd(acc, lat.alpha(t - 1, u - 1));
      if (allow_skip(u)) acc = LogAdd(acc, lat.alpha(t - 1, u - 2));
      lat.alpha(t, u) = acc + logp(t, ext[u]);
    }
  }

  lat.beta(frames - 1, states - 1) = logp(frames - 1, ext[states - 1]);
  if (states > 1) {
    lat.beta(frames - 1, states - 2) = logp(frames - 1, ext[states - 2]);
  }
  for (int t = frames - 2; t >= 0; --t) {
    for (int u = states - 1; u >= 0; --u) {
      double acc = lat.beta(t + 1, u);
      if (u + 1 < states) acc = LogAdd(acc, lat.beta(t + 1, u + 1));
      if (u + 2 < states && allow_skip(u + 2)) {
        acc = LogAdd(acc, lat.beta(t + 1, u + 2));
      }
      lat.beta(t, u) = acc + logp(t, ext[u]);
    }
  }

  lat.log_prob = lat.alpha(frames - 1, states - 1);
  if (states > 1) {
    lat.log_prob = LogAdd(lat.log_prob, lat.alpha(frames - 1, states - 2));
  }
  return lat;
}

void CheckFeasible(const LogitSeq &logits, const TokenSeq &target) {
  if (logits.Vocab() < 2) {
    throw ShapeError("ctc needs vocab >= 2 (blank plus one token), got " +
                     std::to_string(logits.Vocab()));
  }
  if (logits.Frames() < 1) throw ShapeError("ctc needs at least one frame");
  ValidateTarget(target, logits.Vocab());
  if (logits.Frames() < MinFrames(target)) {
    throw InfeasibleTargetError(
        std::to_string(logits.Frames()) + " frames cannot emit " +
        std::to_string(target.Length()) + " tokens (need " +
        std::to_string(MinFrames(target)) + ")");
  }
}

}  // namespace

int MinFrames(const TokenSeq &target) {
  int repeats = 0;
  for (std::size_t i = 1; i < target.tokens.size(); ++i) {
    if (target.tokens[i] == target.tokens[i - 1]) ++repeats;
  }
  return target.Length() + repeats;
}

CtcResult CtcLoss(const LogitSeq &logits, const TokenSeq &target) {
  CheckFeasible(logits, target);
  const int frames = logits.Frames();
  const int vocab = logits.Vocab();
  const std::vector<int> ext = ExtendedLabels(target);
  const Matrix logp = numerics::LogSoftmaxRows(logits.values);
  const Lattice lat = ForwardBackward(logp, ext);

  CtcResult result;
  result.loss = std::max(0.0, -lat.log_prob);
  result.grad = Matrix(frames, vocab);

  // Per frame: pool alpha+beta by label, then grad = softmax - posterior.
  std::vector<double> pooled(vocab);
  for (int t = 0; t < frames; ++t) {
    std::fill(pooled.begin(), pooled.end(), kLogZero);
    for (int u = 0; u < static_cast<int>(ext.size()); ++u) {
      pooled[ext[u]] = LogAdd(pooled[ext[u]], lat.alpha(t, u) + lat.beta(t, u));
    }
    for (int k = 0; k < vocab; ++k) {
      const double softmax = std::exp(logp(t, k));
      double posterior = 0.0;
      if (pooled[k] != kLogZero) {
        posterior = std::exp(pooled[k] - logp(t, k) - lat.log_prob);
      }
      result.grad(t, k) = softmax - posterior;
    }
  }
  return result;
}

double CtcLossValue(const LogitSeq &logits, const TokenSeq &target) {
  CheckFeasible(logits, target);
  const std::vector<int> ext = ExtendedLabels(target);
  const Matrix logp = numerics::LogSoftmaxRows(logits.values);
  const int frames = logits.Frames();
  const int states = static_cast<int>(ext.size());

  auto allow_skip = [&ext](int u) {
    return u >= 2 && ext[u] != kBlank && ext[u] != ext[u - 2];
  };

  // Two-row forward pass only.
  std::vector<double> prev(states, kLogZero), cur(states, kLogZero);
  prev[0] = logp(0, ext[0]);
  if (states > 1) prev[1] = logp(0, ext[1]);
  for (int t = 1; t < frames; ++t) {
    for (int u = 0; u < states; ++u) {
      double acc = prev[u];
      if (u >= 1) acc = LogAdd(acc, prev[u - 1]);
      if (allow_skip(u)) acc = LogAdd(acc, prev[u - 2]);
      cur[u] = acc + logp(t, ext[u]);
    }
    std::swap(prev, cur);
  }
  double log_prob = prev[states - 1];
  if (states > 1) log_prob = LogAdd(log_prob, prev[states - 2]);
  return std::max(0.0, -log_prob);
}

}  // namespace ctc
}  // namespace czsda
