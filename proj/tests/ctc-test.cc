// tests/ctc-test.cc

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
#include "czsda/numerics/gradcheck.h"
#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"
#include "doctest.h"

using czsda::ctc::BruteForceCtc;
using czsda::ctc::CtcLoss;
using czsda::ctc::CtcLossValue;
using czsda::ctc::EditStats;
using czsda::ctc::GreedyDecode;
using czsda::ctc::Levenshtein;
using czsda::ctc::LogitSeq;
using czsda::ctc::TokenSeq;
using czsda::numerics::Matrix;
using czsda::numerics::Rng;

namespace {

LogitSeq RandomLogits(int frames, int vocab, Rng *rng, double scale = 2.0) {
  LogitSeq logits;
  logits.values = Matrix(frames, vocab);
  for (double &v : logits.values.Flat()) v = rng->Uniform(-scale, scale);
  return logits;
}

// Feasible random target for the given frame budget.
TokenSeq RandomFeasibleTarget(int frames, int vocab, int max_len, Rng *rng) {
  TokenSeq target;
  target.vocab = vocab;
  const int len = rng->UniformInt(max_len + 1);  // 0..max_len
  for (int i = 0; i < len; ++i) {
    target.tokens.push_back(1 + rng->UniformInt(vocab - 1));
  }
  while (czsda::ctc::MinFrames(target) > frames) target.tokens.pop_back();
  return target;
}

LogitSeq FromRows(const std::vector<std::vector<double>> &rows) {
  LogitSeq logits;
  logits.values = Matrix(static_cast<int>(rows.size()),
                         static_cast<int>(rows[0].size()));
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t j = 0; j < rows[t].size(); ++j) {
      logits.values(static_cast<int>(t), static_cast<int>(j)) = rows[t][j];
    }
  }
  return logits;
}

}  // namespace

TEST_CASE("ctc single frame with equal logits scores -log(1/2)") {
  const LogitSeq logits = FromRows({{0.0, 0.0}});
  const TokenSeq target{{1}, 2};
  const auto result = CtcLoss(logits, target);
  CHECK(result.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(CtcLossValue(logits, target) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("ctc empty target reduces to the all-blank path") {
  Rng rng(3);
  const LogitSeq logits = RandomLogits(5, 4, &rng);
  const Matrix logp = czsda::numerics::LogSoftmaxRows(logits.values);
  double expected = 0.0;
  for (int t = 0; t < 5; ++t) expected -= logp(t, czsda::ctc::kBlank);
  const auto result = CtcLoss(logits, TokenSeq{{}, 4});
  CHECK(result.loss == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("ctc T=2 V=2 matches the three-path hand enumeration") {
  Rng rng(5);
  const LogitSeq logits = RandomLogits(2, 2, &rng);
  Matrix probs = logits.values;
  czsda::numerics::SoftmaxRowsInPlace(&probs);
  // Valid paths for target [a]: a-, -a, aa.
  const double p = probs(0, 1) * probs(1, 0) + probs(0, 0) * probs(1, 1) +
                   probs(0, 1) * probs(1, 1);
  const TokenSeq target{{1}, 2};
  CHECK(CtcLoss(logits, target).loss ==
        doctest::Approx(-std::log(p)).epsilon(1e-12));
  CHECK(BruteForceCtc(logits, target) ==
        doctest::Approx(-std::log(p)).epsilon(1e-12));
}

TEST_CASE("ctc forward-backward equals brute force on 250 random instances") {
  Rng rng(7);
  int tested = 0;
  while (tested < 250) {
    const int frames = 1 + rng.UniformInt(6);
    const int vocab = 2 + rng.UniformInt(3);
    const LogitSeq logits = RandomLogits(frames, vocab, &rng);
    const TokenSeq target = RandomFeasibleTarget(frames, vocab, 3, &rng);
    const double fast = CtcLoss(logits, target).loss;
    const double slow = BruteForceCtc(logits, target);
    CHECK(std::fabs(fast - slow) < 1e-9);
    CHECK(fast >= 0.0);
    ++tested;
  }
}

TEST_CASE("ctc infeasible targets raise in both implementations") {
  const LogitSeq logits = FromRows({{0.0, 0.0}, {0.0, 0.0}});
  const TokenSeq repeat{{1, 1}, 2};  // needs 3 frames
  CHECK_THROWS_AS(CtcLoss(logits, repeat), czsda::InfeasibleTargetError);
  CHECK_THROWS_AS(BruteForceCtc(logits, repeat),
                  czsda::InfeasibleTargetError);

  const TokenSeq too_long{{1, 1, 1}, 2};
  CHECK_THROWS_AS(CtcLoss(logits, too_long), czsda::InfeasibleTargetError);
}

TEST_CASE("brute force refuses oversized instances") {
  Rng rng(9);
  const LogitSeq logits = RandomLogits(13, 4, &rng);  // 4^13 ≈ 6.7e7
  CHECK_THROWS_AS(BruteForceCtc(logits, TokenSeq{{1}, 4}), czsda::SizeError);
}

TEST_CASE("ctc gradient passes finite differences on 20 instances") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int frames = 2 + rng.UniformInt(5);
    const int vocab = 2 + rng.UniformInt(3);
    LogitSeq logits = RandomLogits(frames, vocab, &rng);
    const TokenSeq target = RandomFeasibleTarget(frames, vocab, 3, &rng);
    const auto result = CtcLoss(logits, target);

    auto loss = [&](std::span<const double> p) {
      LogitSeq probe;
      probe.values = Matrix(frames, vocab);
      std::copy(p.begin(), p.end(), probe.values.Flat().begin());
      return CtcLossValue(probe, target);
    };
    const auto report = czsda::numerics::FiniteDiffCheck(
        loss, logits.values.Flat(), result.grad.Flat(), 1e-4);
    CHECK(report.max_rel_err < 1e-4);
  }
}

TEST_CASE("ctc loss is invariant to per-frame logit shifts") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int frames = 2 + rng.UniformInt(5);
    const int vocab = 2 + rng.UniformInt(3);
    LogitSeq logits = RandomLogits(frames, vocab, &rng);
    const TokenSeq target = RandomFeasibleTarget(frames, vocab, 3, &rng);
    const double base = CtcLoss(logits, target).loss;

    LogitSeq shifted = logits;
    for (int t = 0; t < frames; ++t) {
      const double c = rng.Uniform(-5.0, 5.0);
      for (int j = 0; j < vocab; ++j) shifted.values(t, j) += c;
    }
    CHECK(std::fabs(CtcLoss(shifted, target).loss - base) < 1e-9);
  }
}

TEST_CASE("greedy decode merges repeats then removes blanks") {
  // argmax sequence a a - a  ->  a a
  const LogitSeq seq1 = FromRows(
      {{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}});
  CHECK(GreedyDecode(seq1).tokens == std::vector<int>{1, 1});

  // all blank -> empty
  const LogitSeq seq2 = FromRows({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(GreedyDecode(seq2).Empty());

  // argmax - b b - b a  ->  b b a
  const LogitSeq seq3 = FromRows({{1.0, 0.0, 0.0},
                                  {0.0, 0.0, 1.0},
                                  {0.0, 0.0, 1.0},
                                  {1.0, 0.0, 0.0},
                                  {0.0, 0.0, 1.0},
                                  {0.0, 1.0, 0.0}});
  CHECK(GreedyDecode(seq3).tokens == std::vector<int>{2, 2, 1});
}

TEST_CASE("greedy decode ties resolve to the lowest index") {
  const LogitSeq tied = FromRows({{0.5, 0.5, 0.5}, {0.3, 0.7, 0.7}});
  CHECK(GreedyDecode(tied).tokens == std::vector<int>{1});
}

TEST_CASE("greedy decode never emits blanks and merges every frame repeat") {
  Rng rng(17);
  int adjacent_equal_pairs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int frames = 1 + rng.UniformInt(12);
    const int vocab = 2 + rng.UniformInt(5);
    const LogitSeq logits = RandomLogits(frames, vocab, &rng);
    const TokenSeq decoded = GreedyDecode(logits);

    // Independent collapse: merge consecutive identical argmax entries,
    // then drop blanks. Adjacent equal output tokens are legal exactly
    // when a blank separated them at frame level.
    const std::vector<int> argmax = czsda::ctc::FrameArgmax(logits.values);
    std::vector<int> expected;
    for (std::size_t t = 0; t < argmax.size(); ++t) {
      if (t > 0 && argmax[t] == argmax[t - 1]) continue;
      if (argmax[t] != czsda::ctc::kBlank) expected.push_back(argmax[t]);
    }
    CHECK(decoded.tokens == expected);
    for (std::size_t i = 0; i < decoded.tokens.size(); ++i) {
      CHECK(decoded.tokens[i] != czsda::ctc::kBlank);
      if (i > 0 && decoded.tokens[i] == decoded.tokens[i - 1]) {
        ++adjacent_equal_pairs;
      }
    }
  }
  // Blank-separated repeats do occur in random logits; their presence is
  // what distinguishes the merge-then-drop order from the reverse.
  CHECK(adjacent_equal_pairs > 0);
}

TEST_CASE("levenshtein hand cases") {
  const TokenSeq abc{{1, 2, 3}, 0};
  CHECK(Levenshtein(abc, abc).TotalEdits() == 0);
  CHECK(Levenshtein(abc, abc).error_rate == 0.0);

  const TokenSeq axc{{1, 9, 3}, 0};
  const EditStats sub = Levenshtein(abc, axc);
  CHECK(sub.substitutions == 1);
  CHECK(sub.deletions == 0);
  CHECK(sub.insertions == 0);
  CHECK(sub.error_rate == doctest::Approx(100.0 / 3.0).epsilon(1e-9));

  const EditStats del = Levenshtein(TokenSeq{{1, 2}, 0}, TokenSeq{{1}, 0});
  CHECK(del.substitutions == 0);
  CHECK(del.deletions == 1);
  CHECK(del.insertions == 0);
  CHECK(del.error_rate == doctest::Approx(50.0));
}

TEST_CASE("levenshtein degenerate reference") {
  const EditStats empty_both = Levenshtein(TokenSeq{}, TokenSeq{});
  CHECK(empty_both.error_rate == 0.0);
  CHECK_FALSE(empty_both.degenerate_reference);

  const EditStats empty_ref = Levenshtein(TokenSeq{}, TokenSeq{{1, 2}, 0});
  CHECK(empty_ref.error_rate == doctest::Approx(200.0));
  CHECK(empty_ref.degenerate_reference);
  CHECK(empty_ref.insertions == 2);
}

TEST_CASE("levenshtein swap symmetry: S fixed, D and I exchange") {
  Rng rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    TokenSeq a, b;
    const int la = rng.UniformInt(9);
    const int lb = rng.UniformInt(9);
    for (int i = 0; i < la; ++i) a.tokens.push_back(1 + rng.UniformInt(3));
    for (int i = 0; i < lb; ++i) b.tokens.push_back(1 + rng.UniformInt(3));
    if (a.Empty() || b.Empty()) continue;

    const EditStats fwd = Levenshtein(a, b);
    const EditStats rev = Levenshtein(b, a);
    CHECK(fwd.TotalEdits() == rev.TotalEdits());
    CHECK(fwd.substitutions == rev.substitutions);
    CHECK(fwd.deletions == rev.insertions);
    CHECK(fwd.insertions == rev.deletions);
    CHECK(Levenshtein(a, a).TotalEdits() == 0);
  }
}
