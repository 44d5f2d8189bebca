// czsda/synthlang/language.cc

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

#include "czsda/synthlang/language.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "czsda/base/error.h"
#include "czsda/base/io.h"

namespace czsda {
namespace synth {

using numerics::Matrix;

namespace {

double RowDistance(const Matrix &a, int i, const Matrix &b, int j) {
  double acc = 0.0;
  for (int d = 0; d < a.Cols(); ++d) {
    const double diff = a(i, d) - b(j, d);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

Matrix SamplePrototypes(int count, int dim, double margin,
                        const Matrix &center, numerics::Rng *rng) {
  if (center.Rows() != 1 || center.Cols() != dim) {
    throw ShapeError("prototype center must be 1x" + std::to_string(dim));
  }
  Matrix protos(count, dim);
  const int max_attempts = 1000;
  for (int i = 0; i < count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < max_attempts && !placed; ++attempt) {
      for (int d = 0; d < dim; ++d) {
        protos(i, d) = center(0, d) + rng->Gaussian();
      }
      placed = true;
      for (int j = 0; j < i; ++j) {
        if (RowDistance(protos, i, protos, j) < margin) {
          placed = false;
          break;
        }
      }
    }
    if (!placed) {
      throw ConfigError("cannot place " + std::to_string(count) +
                        " prototypes at margin " + std::to_string(margin) +
                        " in " + std::to_string(dim) + " dims");
    }
  }
  return protos;
}

Matrix Synthesize(const LanguageSpec &lang, const ctc::TokenSeq &tokens,
                  const DomainSpec &domain, numerics::Rng *rng) {
  if (tokens.Empty()) throw UsageError("synthesize needs a non-empty token sequence");
  const int dim = lang.FeatureDim();
  if (domain.channel.Rows() != dim || domain.channel.Cols() != dim) {
    throw ShapeError("domain channel is " + std::to_string(domain.channel.Rows()) +
                     "x" + std::to_string(domain.channel.Cols()) +
                     ", language dim is " + std::to_string(dim));
  }
  if (domain.tempo < 1) throw ConfigError("tempo must be >= 1");

  // Clean per-token segments first.
  std::vector<int> durations(tokens.tokens.size());
  int clean_frames = 0;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    const int token = tokens.tokens[i];
    if (token < 1 || token > static_cast<int>(lang.vocab.size())) {
      throw VocabError("token " + std::to_string(token) + " outside " +
                       lang.name + " vocabulary");
    }
    durations[i] = lang.dur_min + rng->UniformInt(lang.dur_max - lang.dur_min + 1);
    clean_frames += durations[i];
  }

  Matrix clean(clean_frames, dim);
  int row = 0;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    const int proto = tokens.tokens[i] - 1;
    for (int f = 0; f < durations[i]; ++f, ++row) {
      double *dst = clean.RowData(row);
      for (int d = 0; d < dim; ++d) {
        dst[d] = lang.prototypes(proto, d) + domain.noise_std * rng->Gaussian();
      }
    }
  }

  // Tempo repetition, then channel and gain per frame.
  Matrix out(clean_frames * domain.tempo, dim);
  for (int t = 0; t < clean_frames; ++t) {
    const double *src = clean.RowData(t);
    for (int rep = 0; rep < domain.tempo; ++rep) {
      double *dst = out.RowData(t * domain.tempo + rep);
      for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        const double *channel_row = domain.channel.RowData(i);
        for (int j = 0; j < dim; ++j) acc += channel_row[j] * src[j];
        dst[i] = domain.gain * acc;
      }
    }
  }
  return out;
}

namespace {
constexpr const char kLangMagic[] = "LSPC";
constexpr const char kDomainMagic[] = "DSPC";
}  // namespace

void SaveLanguageSpec(const LanguageSpec &lang, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write language spec " + path);
  os.write(kLangMagic, sizeof(kLangMagic) - 1);
  io::WriteString(os, lang.name);
  io::WriteU32(os, static_cast<std::uint32_t>(lang.vocab.size()));
  for (const std::string &symbol : lang.vocab) io::WriteString(os, symbol);
  io::WriteU32(os, static_cast<std::uint32_t>(lang.FeatureDim()));
  io::WriteU32(os, static_cast<std::uint32_t>(lang.dur_min));
  io::WriteU32(os, static_cast<std::uint32_t>(lang.dur_max));
  io::WriteF64(os, lang.margin);
  io::WriteMatrixPayload(os, lang.prototypes);
  if (!os) throw IoError("write failed for " + path);
}

LanguageSpec LoadLanguageSpec(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open language spec " + path);
  io::ExpectMagic(is, kLangMagic, path);
  LanguageSpec lang;
  lang.name = io::ReadString(is);
  const std::uint32_t count = io::ReadU32(is);
  for (std::uint32_t i = 0; i < count; ++i) lang.vocab.push_back(io::ReadString(is));
  const int dim = static_cast<int>(io::ReadU32(is));
  lang.dur_min = static_cast<int>(io::ReadU32(is));
  lang.dur_max = static_cast<int>(io::ReadU32(is));
  lang.margin = io::ReadF64(is);
  lang.prototypes = io::ReadMatrixPayload(is, static_cast<int>(count), dim);
  return lang;
}

void SaveDomainSpec(const DomainSpec &domain, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write domain spec " + path);
  os.write(kDomainMagic, sizeof(kDomainMagic) - 1);
  io::WriteString(os, domain.name);
  io::WriteU32(os, static_cast<std::uint32_t>(domain.channel.Rows()));
  io::WriteMatrixPayload(os, domain.channel);
  io::WriteF64(os, domain.gain);
  io::WriteF64(os, domain.noise_std);
  io::WriteU32(os, static_cast<std::uint32_t>(domain.tempo));
  if (!os) throw IoError("write failed for " + path);
}

DomainSpec LoadDomainSpec(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open domain spec " + path);
  io::ExpectMagic(is, kDomainMagic, path);
  DomainSpec domain;
  domain.name = io::ReadString(is);
  const int dim = static_cast<int>(io::ReadU32(is));
  domain.channel = io::ReadMatrixPayload(is, dim, dim);
  domain.gain = io::ReadF64(is);
  domain.noise_std = io::ReadF64(is);
  domain.tempo = static_cast<int>(io::ReadU32(is));
  return domain;
}

std::vector<std::string> VocabWithBlank(const LanguageSpec &lang) {
  std::vector<std::string> vocab;
  vocab.push_back("<blk>");
  vocab.insert(vocab.end(), lang.vocab.begin(), lang.vocab.end());
  return vocab;
}

ctc::TokenSeq TokensFromSymbols(const std::vector<std::string> &vocab_with_blank,
                                const std::string &spaced_symbols) {
  ctc::TokenSeq tokens;
  tokens.vocab = static_cast<int>(vocab_with_blank.size());
  std::istringstream is(spaced_symbols);
  std::string symbol;
  while (is >> symbol) {
    int index = -1;
    for (std::size_t k = 1; k < vocab_with_blank.size(); ++k) {
      if (vocab_with_blank[k] == symbol) {
        index = static_cast<int>(k);
        break;
      }
    }
    if (index < 0) throw VocabError("unknown symbol \"" + symbol + "\"");
    tokens.tokens.push_back(index);
  }
  return tokens;
}

std::string SymbolsFromTokens(const std::vector<std::string> &vocab_with_blank,
                              const ctc::TokenSeq &tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.tokens.size(); ++i) {
    const int token = tokens.tokens[i];
    if (token < 1 || token >= static_cast<int>(vocab_with_blank.size())) {
      throw VocabError("token " + std::to_string(token) + " outside vocabulary");
    }
    if (i > 0) out += ' ';
    out += vocab_with_blank[token];
  }
  return out;
}

}  // namespace synth
}  // namespace czsda
