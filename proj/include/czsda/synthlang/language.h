// czsda/synthlang/language.h

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

#ifndef CZSDA_SYNTHLANG_LANGUAGE_H_
#define CZSDA_SYNTHLANG_LANGUAGE_H_

#include <optional>
#include <string>
#include <vector>

#include "czsda/ctc/ctc.h"
#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"

namespace czsda {
namespace synth {

// A synthetic "language": one prototype vector per grapheme plus a
// duration range. Token index k (1-based, 0 is blank) maps to prototype
// row k-1.
struct LanguageSpec {
  std::string name;
  std::vector<std::string> vocab;   // non-blank symbols
  numerics::Matrix prototypes;      // (V-1)×d
  int dur_min = 2;
  int dur_max = 5;
  double margin = 0.0;              // enforced pairwise prototype distance

  int VocabSize() const { return static_cast<int>(vocab.size()) + 1; }
  int FeatureDim() const { return prototypes.Cols(); }
};

// A recording condition: linear channel, gain, additive noise, and a
// frame-repetition tempo factor.
struct DomainSpec {
  std::string name;
  numerics::Matrix channel;  // d×d, invertible
  double gain = 1.0;
  double noise_std = 0.0;
  int tempo = 1;
};

struct Utterance {
  std::string id;
  numerics::Matrix frames;                 // T×d
  std::optional<ctc::TokenSeq> transcript; // absent on unlabeled data
  std::string language;
  std::string domain;
};

// Sample prototypes with pairwise distance >= margin (rejection
// sampling around |center|). Throws ConfigError if the margin cannot be
// met within the attempt budget.
numerics::Matrix SamplePrototypes(int count, int dim, double margin,
                                  const numerics::Matrix &center,
                                  numerics::Rng *rng);

// Per token: uniform duration in [dur_min, dur_max], frames = prototype
// plus N(0, noise_std^2) per entry; concatenate; repeat each frame
// `tempo` times; then map every frame through gain * channel * frame.
// Throws VocabError for out-of-range tokens, UsageError for empty input.
numerics::Matrix Synthesize(const LanguageSpec &lang,
                            const ctc::TokenSeq &tokens,
                            const DomainSpec &domain, numerics::Rng *rng);

// Binary spec files, deterministic byte-for-byte.
void SaveLanguageSpec(const LanguageSpec &lang, const std::string &path);
LanguageSpec LoadLanguageSpec(const std::string &path);
void SaveDomainSpec(const DomainSpec &domain, const std::string &path);
DomainSpec LoadDomainSpec(const std::string &path);

// Symbol <-> token index mapping. Index 0 is the blank; symbol file
// line k names token k. Unknown symbols raise VocabError.
std::vector<std::string> VocabWithBlank(const LanguageSpec &lang);
ctc::TokenSeq TokensFromSymbols(const std::vector<std::string> &vocab_with_blank,
                                const std::string &spaced_symbols);
std::string SymbolsFromTokens(const std::vector<std::string> &vocab_with_blank,
                              const ctc::TokenSeq &tokens);

}  // namespace synth
}  // namespace czsda

#endif  // CZSDA_SYNTHLANG_LANGUAGE_H_
