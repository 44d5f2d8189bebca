// czsda/synthlang/corpus.cc

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

#include "czsda/synthlang/corpus.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/numerics/eigen.h"

namespace czsda {
namespace synth {

using numerics::Matrix;
using numerics::Rng;

namespace {

constexpr const char kTargetLang[] = "alpha";
constexpr const char kSourceLang[] = "beta";
constexpr const char kSourceDomain[] = "studio";
constexpr const char kTargetDomain[] = "field";

// Stable split tags for the seed tree.
enum : std::uint64_t {
  kTagTargetLang = 1,
  kTagSourceLang = 2,
  kTagChannel = 3,
  kTagCorpusL = 10,
  kTagCorpusU = 11,
  kTagCorpusDev = 12,
  kTagCorpusTest = 13,
};

}  // namespace

ScenarioConfig ScenarioConfig::FromKv(const KvConfig &kv) {
  ScenarioConfig config;
  config.language_distance = kv.GetString("language_distance", config.language_distance);
  config.u_domain = kv.GetString("u_domain", config.u_domain);
  config.gap = kv.GetString("gap", config.gap);
  config.feature_dim = kv.GetInt("feature_dim", config.feature_dim);
  config.vocab_size = kv.GetInt("vocab_size", config.vocab_size);
  config.margin = kv.GetDouble("margin", config.margin);
  config.close_offset_ratio = kv.GetDouble("close_offset_ratio", config.close_offset_ratio);
  config.n_labeled = kv.GetInt("n_labeled", config.n_labeled);
  config.n_unlabeled = kv.GetInt("n_unlabeled", config.n_unlabeled);
  config.n_dev = kv.GetInt("n_dev", config.n_dev);
  config.n_test = kv.GetInt("n_test", config.n_test);
  config.token_len_min = kv.GetInt("token_len_min", config.token_len_min);
  config.token_len_max = kv.GetInt("token_len_max", config.token_len_max);
  config.dur_min = kv.GetInt("dur_min", config.dur_min);
  config.dur_max = kv.GetInt("dur_max", config.dur_max);
  config.noise_std_base = kv.GetDouble("noise_std_base", config.noise_std_base);
  config.channel_eps = kv.GetDouble("channel_eps", config.channel_eps);
  kv.CheckAllConsumed("scenario");

  if (config.language_distance != "close" && config.language_distance != "distant") {
    throw ConfigError("language_distance must be close or distant");
  }
  if (config.u_domain != "target" && config.u_domain != "source") {
    throw ConfigError("u_domain must be target or source");
  }
  if (config.gap != "severe" && config.gap != "mild") {
    throw ConfigError("gap must be severe or mild");
  }
  if (config.vocab_size < 2 || config.feature_dim < 2) {
    throw ConfigError("vocab_size and feature_dim must be >= 2");
  }
  if (config.token_len_min < 1 || config.token_len_max < config.token_len_min) {
    throw ConfigError("bad token length range");
  }
  if (config.dur_min < 1 || config.dur_max < config.dur_min) {
    throw ConfigError("bad duration range");
  }
  return config;
}

KvConfig ScenarioConfig::ToKv() const {
  KvConfig kv;
  kv.Set("language_distance", language_distance);
  kv.Set("u_domain", u_domain);
  kv.Set("gap", gap);
  kv.Set("feature_dim", std::to_string(feature_dim));
  kv.Set("vocab_size", std::to_string(vocab_size));
  kv.Set("margin", std::to_string(margin));
  kv.Set("close_offset_ratio", std::to_string(close_offset_ratio));
  kv.Set("n_labeled", std::to_string(n_labeled));
  kv.Set("n_unlabeled", std::to_string(n_unlabeled));
  kv.Set("n_dev", std::to_string(n_dev));
  kv.Set("n_test", std::to_string(n_test));
  kv.Set("token_len_min", std::to_string(token_len_min));
  kv.Set("token_len_max", std::to_string(token_len_max));
  kv.Set("dur_min", std::to_string(dur_min));
  kv.Set("dur_max", std::to_string(dur_max));
  kv.Set("noise_std_base", std::to_string(noise_std_base));
  kv.Set("channel_eps", std::to_string(channel_eps));
  return kv;
}

std::string CorpusLayout::Manifest(const std::string &split) const {
  return dir + "/" + split + ".tsv";
}

std::string CorpusLayout::VocabFile(const std::string &language) const {
  return dir + "/vocab." + language + ".txt";
}

std::string CorpusLayout::LanguageSpecFile(const std::string &language) const {
  return dir + "/lang." + language + ".spec";
}

std::string CorpusLayout::DomainSpecFile(const std::string &domain) const {
  return dir + "/domain." + domain + ".spec";
}

namespace {

std::vector<std::string> MakeSymbols(int count, const std::string &prefix) {
  // alpha: a, b, c...  beta: za, zb, zc... (two alphabets, no overlap)
  std::vector<std::string> symbols;
  for (int i = 0; i < count; ++i) {
    std::string symbol = prefix;
    symbol += static_cast<char>('a' + i % 26);
    if (i >= 26) symbol += std::to_string(i / 26);
    symbols.push_back(symbol);
  }
  return symbols;
}

LanguageSpec MakeTargetLanguage(const ScenarioConfig &config, Rng *rng) {
  LanguageSpec lang;
  lang.name = kTargetLang;
  lang.vocab = MakeSymbols(config.vocab_size, "");
  lang.dur_min = config.dur_min;
  lang.dur_max = config.dur_max;
  lang.margin = config.margin;
  Matrix center(1, config.feature_dim);
  lang.prototypes = SamplePrototypes(config.vocab_size, config.feature_dim,
                                     config.margin, center, rng);
  return lang;
}

LanguageSpec MakeSourceLanguage(const ScenarioConfig &config,
                                const LanguageSpec &target, Rng *rng) {
  LanguageSpec lang;
  lang.name = kSourceLang;
  lang.vocab = MakeSymbols(config.vocab_size, "z");
  lang.dur_min = config.dur_min;
  lang.dur_max = config.dur_max;
  lang.margin = config.margin;

  if (config.language_distance == "close") {
    // Paired prototypes: target prototype k plus a fixed-length offset in
    // a random direction, so grapheme k of beta sounds like grapheme k
    // of alpha, shifted by close_offset_ratio * margin.
    lang.prototypes = Matrix(config.vocab_size, config.feature_dim);
    const double offset = config.close_offset_ratio * config.margin;
    for (int k = 0; k < config.vocab_size; ++k) {
      Matrix dir(1, config.feature_dim);
      double norm = 0.0;
      for (int d = 0; d < config.feature_dim; ++d) {
        dir(0, d) = rng->Gaussian();
        norm += dir(0, d) * dir(0, d);
      }
      norm = std::sqrt(norm);
      for (int d = 0; d < config.feature_dim; ++d) {
        lang.prototypes(k, d) = target.prototypes(k, d) + offset * dir(0, d) / norm;
      }
    }
  } else {
    // Disjoint region: a fresh cloud centered far from the target cloud.
    Matrix center(1, config.feature_dim);
    Matrix dir(1, config.feature_dim);
    double norm = 0.0;
    for (int d = 0; d < config.feature_dim; ++d) {
      dir(0, d) = rng->Gaussian();
      norm += dir(0, d) * dir(0, d);
    }
    norm = std::sqrt(norm);
    const double distance = 3.0 * config.margin;
    for (int d = 0; d < config.feature_dim; ++d) {
      center(0, d) = distance * dir(0, d) / norm;
    }
    lang.prototypes = SamplePrototypes(config.vocab_size, config.feature_dim,
                                       config.margin, center, rng);
  }
  return lang;
}

DomainSpec MakeSourceDomain(const ScenarioConfig &config) {
  DomainSpec domain;
  domain.name = kSourceDomain;
  domain.channel = Matrix(config.feature_dim, config.feature_dim);
  for (int d = 0; d < config.feature_dim; ++d) domain.channel(d, d) = 1.0;
  domain.gain = 1.0;
  domain.noise_std = config.noise_std_base;
  domain.tempo = 1;
  return domain;
}

DomainSpec MakeTargetDomain(const ScenarioConfig &config, Rng *rng) {
  const bool severe = config.gap == "severe";
  DomainSpec domain;
  domain.name = kTargetDomain;
  domain.gain = severe ? 0.8 : 0.9;
  domain.noise_std = config.noise_std_base * (severe ? 3.0 : 1.5);
  domain.tempo = severe ? 2 : 1;

  const double eps =
      config.channel_eps > 0.0 ? config.channel_eps : (severe ? 0.25 : 0.1);
  const int dim = config.feature_dim;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng stream = rng->Split(attempt);
    Matrix channel(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        channel(i, j) = (i == j ? 1.0 : 0.0) +
                        eps * stream.Uniform(-1.0, 1.0) / std::sqrt(dim);
      }
    }
    if (numerics::ConditionNumber(channel) < 4.0) {
      domain.channel = std::move(channel);
      break;
    }
    if (attempt > 64) throw ConfigError("cannot draw a well-conditioned channel");
  }
  return domain;
}

ctc::TokenSeq RandomTranscript(const ScenarioConfig &config, int vocab_size,
                               Rng *rng) {
  ctc::TokenSeq tokens;
  tokens.vocab = vocab_size + 1;
  const int len = config.token_len_min +
                  rng->UniformInt(config.token_len_max - config.token_len_min + 1);
  for (int i = 0; i < len; ++i) {
    tokens.tokens.push_back(1 + rng->UniformInt(vocab_size));
  }
  return tokens;
}

void WriteVocabFile(const LanguageSpec &lang, const std::string &path) {
  std::string text;
  for (const std::string &symbol : VocabWithBlank(lang)) {
    text += symbol;
    text += '\n';
  }
  io::WriteTextFile(path, text);
}

struct SplitPlan {
  std::string split;        // manifest stem
  std::string id_prefix;
  int count = 0;
  const LanguageSpec *lang = nullptr;
  const DomainSpec *domain = nullptr;
  std::uint64_t tag = 0;
  bool labeled = false;     // transcript in the manifest itself
};

}  // namespace

CorpusLayout GenCorpus(const ScenarioConfig &config, std::uint64_t seed,
                       const std::string &dir) {
  namespace fs = std::filesystem;
  CorpusLayout layout{dir};
  std::error_code ec;
  fs::create_directories(layout.FramesDir(), ec);
  if (ec) throw IoError("cannot create " + layout.FramesDir() + ": " + ec.message());

  Rng root(seed);
  Rng lang_rng = root.Split(kTagTargetLang);
  const LanguageSpec target_lang = MakeTargetLanguage(config, &lang_rng);
  Rng source_rng = root.Split(kTagSourceLang);
  const LanguageSpec source_lang =
      MakeSourceLanguage(config, target_lang, &source_rng);
  const DomainSpec source_domain = MakeSourceDomain(config);
  Rng channel_rng = root.Split(kTagChannel);
  const DomainSpec target_domain = MakeTargetDomain(config, &channel_rng);

  // The cross-domain ablation keeps U's language but moves it into the
  // same domain as L, removing all target-domain exposure.
  const DomainSpec &u_domain =
      config.u_domain == "target" ? target_domain : source_domain;

  const SplitPlan plans[] = {
      {"L", "L", config.n_labeled, &target_lang, &source_domain, kTagCorpusL, true},
      {"U", "U", config.n_unlabeled, &source_lang, &u_domain, kTagCorpusU, false},
      {"dev", "D", config.n_dev, &target_lang, &target_domain, kTagCorpusDev, true},
      {"test", "T", config.n_test, &target_lang, &target_domain, kTagCorpusTest, true},
  };

  for (const SplitPlan &plan : plans) {
    std::vector<ManifestEntry> rows;
    std::vector<ManifestEntry> sidecar_rows;
    const std::vector<std::string> vocab = VocabWithBlank(*plan.lang);
    Rng split_rng = root.Split(plan.tag);
    for (int i = 0; i < plan.count; ++i) {
      Rng utt_rng = split_rng.Split(static_cast<std::uint64_t>(i));
      const ctc::TokenSeq transcript =
          RandomTranscript(config, static_cast<int>(plan.lang->vocab.size()),
                           &utt_rng);
      const Matrix frames =
          Synthesize(*plan.lang, transcript, *plan.domain, &utt_rng);

      char id[32];
      std::snprintf(id, sizeof(id), "%s%06d", plan.id_prefix.c_str(), i);
      const std::string rel = "frames/" + std::string(id) + ".fram";
      SaveFrames(frames, dir + "/" + rel);

      ManifestEntry entry{id, rel, plan.lang->name, plan.domain->name,
                          SymbolsFromTokens(vocab, transcript)};
      if (plan.labeled) {
        rows.push_back(entry);
      } else {
        sidecar_rows.push_back(entry);
        entry.transcript = "-";
        rows.push_back(entry);
      }
    }
    SaveManifest(rows, layout.Manifest(plan.split));
    if (!sidecar_rows.empty()) SaveManifest(sidecar_rows, layout.Sidecar());
  }

  WriteVocabFile(target_lang, layout.VocabFile(target_lang.name));
  WriteVocabFile(source_lang, layout.VocabFile(source_lang.name));
  SaveLanguageSpec(target_lang, layout.LanguageSpecFile(target_lang.name));
  SaveLanguageSpec(source_lang, layout.LanguageSpecFile(source_lang.name));
  SaveDomainSpec(source_domain, layout.DomainSpecFile(source_domain.name));
  SaveDomainSpec(target_domain, layout.DomainSpecFile(target_domain.name));

  KvConfig provenance = config.ToKv();
  provenance.Set("seed", std::to_string(seed));
  io::WriteTextFile(layout.ScenarioFile(), provenance.Canonical());
  return layout;
}

void SaveFrames(const Matrix &frames, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write frames " + path);
  os.write("FRAM", 4);
  io::WriteU32(os, static_cast<std::uint32_t>(frames.Rows()));
  io::WriteU32(os, static_cast<std::uint32_t>(frames.Cols()));
  io::WriteMatrixPayload(os, frames);
  if (!os) throw IoError("write failed for frames " + path);
}

Matrix LoadFrames(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open frames " + path);
  io::ExpectMagic(is, "FRAM", path);
  const int rows = static_cast<int>(io::ReadU32(is));
  const int cols = static_cast<int>(io::ReadU32(is));
  return io::ReadMatrixPayload(is, rows, cols);
}

std::vector<ManifestEntry> LoadManifest(const std::string &path) {
  std::istringstream is(io::ReadTextFile(path));
  std::vector<ManifestEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    ManifestEntry entry;
    std::istringstream fields(line);
    std::string transcript;
    if (!std::getline(fields, entry.id, '\t') ||
        !std::getline(fields, entry.relative_path, '\t') ||
        !std::getline(fields, entry.language, '\t') ||
        !std::getline(fields, entry.domain, '\t') ||
        !std::getline(fields, transcript)) {
      throw IoError("manifest " + path + " line " + std::to_string(lineno) +
                    " is malformed");
    }
    entry.transcript = transcript;
    entries.push_back(std::move(entry));
  }
  return entries;
}

void SaveManifest(const std::vector<ManifestEntry> &entries,
                  const std::string &path) {
  std::string text;
  for (const ManifestEntry &entry : entries) {
    text += entry.id + '\t' + entry.relative_path + '\t' + entry.language +
            '\t' + entry.domain + '\t' + entry.transcript + '\n';
  }
  io::WriteTextFile(path, text);
}

std::vector<std::string> LoadVocab(const std::string &path) {
  std::istringstream is(io::ReadTextFile(path));
  std::vector<std::string> vocab;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) vocab.push_back(line);
  }
  if (vocab.empty() || vocab.front() != "<blk>") {
    throw IoError("vocab file " + path + " must start with <blk>");
  }
  return vocab;
}

}  // namespace synth
}  // namespace czsda
