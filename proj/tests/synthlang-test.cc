// tests/synthlang-test.cc

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
#include <filesystem>
#include <set>

#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/numerics/eigen.h"
#include "czsda/synthlang/corpus.h"
#include "czsda/synthlang/language.h"
#include "doctest.h"

using czsda::ctc::TokenSeq;
using czsda::numerics::Matrix;
using czsda::numerics::Rng;
using czsda::synth::DomainSpec;
using czsda::synth::GenCorpus;
using czsda::synth::LanguageSpec;
using czsda::synth::LoadManifest;
using czsda::synth::ScenarioConfig;
using czsda::synth::Synthesize;

namespace {

namespace fs = std::filesystem;

LanguageSpec TinyLanguage(Rng *rng) {
  LanguageSpec lang;
  lang.name = "tiny";
  lang.vocab = {"a", "b", "c"};
  lang.margin = 1.5;
  lang.dur_min = 2;
  lang.dur_max = 2;
  Matrix center(1, 4);
  lang.prototypes = czsda::synth::SamplePrototypes(3, 4, 1.5, center, rng);
  return lang;
}

DomainSpec IdentityDomain(int dim) {
  DomainSpec domain;
  domain.name = "flat";
  domain.channel = Matrix(dim, dim);
  for (int d = 0; d < dim; ++d) domain.channel(d, d) = 1.0;
  return domain;
}

std::string TempDir(const std::string &stem) {
  const fs::path dir = fs::temp_directory_path() / stem;
  fs::remove_all(dir);
  return dir.string();
}

double RowDist(const Matrix &a, int i, const Matrix &b, int j) {
  double acc = 0.0;
  for (int d = 0; d < a.Cols(); ++d) {
    const double diff = a(i, d) - b(j, d);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

ScenarioConfig TinyScenario() {
  ScenarioConfig config;
  config.n_labeled = 12;
  config.n_unlabeled = 10;
  config.n_dev = 4;
  config.n_test = 6;
  return config;
}

std::string Slurp(const std::string &path) {
  return czsda::io::ReadTextFile(path);
}

}  // namespace

TEST_CASE("synthesize with clean settings emits exact prototype copies") {
  Rng rng(1);
  const LanguageSpec lang = TinyLanguage(&rng);
  const DomainSpec domain = IdentityDomain(4);  // gain 1, noise 0, tempo 1

  Rng synth_rng(2);
  const Matrix frames = Synthesize(lang, TokenSeq{{1}, 4}, domain, &synth_rng);
  REQUIRE(frames.Rows() == 2);  // duration forced to 2 by dur range
  for (int t = 0; t < 2; ++t) {
    for (int d = 0; d < 4; ++d) {
      CHECK(frames(t, d) == lang.prototypes(0, d));
    }
  }
}

TEST_CASE("synthesize is seed-deterministic and respects tempo/gain") {
  Rng rng(3);
  const LanguageSpec lang = TinyLanguage(&rng);
  DomainSpec domain = IdentityDomain(4);
  domain.gain = 0.5;
  domain.noise_std = 0.2;
  domain.tempo = 3;

  const TokenSeq tokens{{1, 3, 2}, 4};
  Rng a(77), b(77);
  const Matrix fa = Synthesize(lang, tokens, domain, &a);
  const Matrix fb = Synthesize(lang, tokens, domain, &b);
  CHECK(fa == fb);
  CHECK(fa.Rows() % 3 == 0);
  // Tempo repeats whole frames: consecutive triples are identical.
  for (int t = 0; t < fa.Rows(); t += 3) {
    for (int d = 0; d < 4; ++d) {
      CHECK(fa(t, d) == fa(t + 1, d));
      CHECK(fa(t, d) == fa(t + 2, d));
    }
  }
}

TEST_CASE("synthesize rejects bad tokens and empty input") {
  Rng rng(4);
  const LanguageSpec lang = TinyLanguage(&rng);
  const DomainSpec domain = IdentityDomain(4);
  Rng s(1);
  CHECK_THROWS_AS(Synthesize(lang, TokenSeq{{9}, 0}, domain, &s),
                  czsda::VocabError);
  CHECK_THROWS_AS(Synthesize(lang, TokenSeq{}, domain, &s), czsda::UsageError);
}

TEST_CASE("language and domain specs round trip through disk") {
  Rng rng(5);
  const LanguageSpec lang = TinyLanguage(&rng);
  const std::string dir = TempDir("czsda-spec-roundtrip");
  fs::create_directories(dir);

  czsda::synth::SaveLanguageSpec(lang, dir + "/lang.spec");
  const LanguageSpec loaded = czsda::synth::LoadLanguageSpec(dir + "/lang.spec");
  CHECK(loaded.name == lang.name);
  CHECK(loaded.vocab == lang.vocab);
  CHECK(loaded.prototypes == lang.prototypes);
  CHECK(loaded.dur_min == lang.dur_min);
  CHECK(loaded.margin == lang.margin);

  DomainSpec domain = IdentityDomain(4);
  domain.gain = 0.8;
  domain.noise_std = 0.75;
  domain.tempo = 2;
  czsda::synth::SaveDomainSpec(domain, dir + "/domain.spec");
  const DomainSpec domain_loaded =
      czsda::synth::LoadDomainSpec(dir + "/domain.spec");
  CHECK(domain_loaded.channel == domain.channel);
  CHECK(domain_loaded.gain == domain.gain);
  CHECK(domain_loaded.noise_std == domain.noise_std);
  CHECK(domain_loaded.tempo == domain.tempo);
  fs::remove_all(dir);
}

TEST_CASE("gen corpus writes the expected counts, tags and files") {
  const std::string dir = TempDir("czsda-corpus-default");
  const auto layout = GenCorpus(TinyScenario(), 7, dir);

  const auto l = LoadManifest(layout.Manifest("L"));
  const auto u = LoadManifest(layout.Manifest("U"));
  const auto dev = LoadManifest(layout.Manifest("dev"));
  const auto test = LoadManifest(layout.Manifest("test"));
  const auto sidecar = LoadManifest(layout.Sidecar());

  CHECK(l.size() == 12);
  CHECK(u.size() == 10);
  CHECK(dev.size() == 4);
  CHECK(test.size() == 6);
  CHECK(sidecar.size() == 10);

  for (const auto &entry : l) {
    CHECK(entry.language == "alpha");
    CHECK(entry.domain == "studio");
    CHECK(entry.Labeled());
  }
  for (const auto &entry : u) {
    CHECK(entry.language == "beta");
    CHECK(entry.domain == "field");
    CHECK_FALSE(entry.Labeled());
  }
  for (const auto &entry : test) {
    CHECK(entry.language == "alpha");
    CHECK(entry.domain == "field");
    CHECK(entry.Labeled());
  }
  // Sidecar carries the truth for exactly the U ids.
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(sidecar[i].id == u[i].id);
    CHECK(sidecar[i].Labeled());
  }

  // Transcript lengths in the configured range; frames load and match
  // the declared feature dim.
  const auto vocab = czsda::synth::LoadVocab(layout.VocabFile("alpha"));
  CHECK(vocab.size() == 13);
  for (const auto &entry : test) {
    const auto tokens = czsda::synth::TokensFromSymbols(vocab, entry.transcript);
    CHECK(tokens.Length() >= 3);
    CHECK(tokens.Length() <= 8);
    const Matrix frames =
        czsda::synth::LoadFrames(dir + "/" + entry.relative_path);
    CHECK(frames.Cols() == 16);
    CHECK(frames.AllFinite());
  }
  fs::remove_all(dir);
}

TEST_CASE("gen corpus is byte-identical under the same seed") {
  const std::string dir_a = TempDir("czsda-corpus-rep-a");
  const std::string dir_b = TempDir("czsda-corpus-rep-b");
  const auto layout_a = GenCorpus(TinyScenario(), 11, dir_a);
  const auto layout_b = GenCorpus(TinyScenario(), 11, dir_b);

  for (const std::string file :
       {"L.tsv", "U.tsv", "dev.tsv", "test.tsv", "U.sidecar.tsv",
        "vocab.alpha.txt", "vocab.beta.txt", "lang.alpha.spec",
        "lang.beta.spec", "domain.studio.spec", "domain.field.spec",
        "scenario.txt"}) {
    CHECK(Slurp(dir_a + "/" + file) == Slurp(dir_b + "/" + file));
  }
  for (const auto &entry : LoadManifest(layout_a.Manifest("L"))) {
    CHECK(Slurp(dir_a + "/" + entry.relative_path) ==
          Slurp(dir_b + "/" + entry.relative_path));
  }

  // A different seed changes the corpus.
  const std::string dir_c = TempDir("czsda-corpus-rep-c");
  GenCorpus(TinyScenario(), 12, dir_c);
  CHECK(Slurp(dir_a + "/frames/L000000.fram") !=
        Slurp(dir_c + "/frames/L000000.fram"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST_CASE("close prototypes sit at the configured offset, distant ones far away") {
  const std::string dir = TempDir("czsda-corpus-close");
  ScenarioConfig config = TinyScenario();
  const auto layout = GenCorpus(config, 13, dir);
  const auto alpha = czsda::synth::LoadLanguageSpec(layout.LanguageSpecFile("alpha"));
  const auto beta = czsda::synth::LoadLanguageSpec(layout.LanguageSpecFile("beta"));

  const double offset = config.close_offset_ratio * config.margin;
  for (int k = 0; k < alpha.prototypes.Rows(); ++k) {
    CHECK(RowDist(alpha.prototypes, k, beta.prototypes, k) ==
          doctest::Approx(offset).epsilon(1e-9));
  }

  // Pairwise margins hold within each language.
  for (int i = 0; i < alpha.prototypes.Rows(); ++i) {
    for (int j = i + 1; j < alpha.prototypes.Rows(); ++j) {
      CHECK(RowDist(alpha.prototypes, i, alpha.prototypes, j) >= config.margin);
    }
  }

  const std::string dir2 = TempDir("czsda-corpus-distant");
  config.language_distance = "distant";
  const auto layout2 = GenCorpus(config, 13, dir2);
  const auto beta_far =
      czsda::synth::LoadLanguageSpec(layout2.LanguageSpecFile("beta"));
  for (int i = 0; i < alpha.prototypes.Rows(); ++i) {
    for (int j = 0; j < beta_far.prototypes.Rows(); ++j) {
      CHECK(RowDist(alpha.prototypes, i, beta_far.prototypes, j) > offset);
    }
  }
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("cross-domain flag moves U into the studio domain") {
  const std::string dir = TempDir("czsda-corpus-xdom");
  ScenarioConfig config = TinyScenario();
  config.u_domain = "source";
  const auto layout = GenCorpus(config, 17, dir);
  for (const auto &entry : LoadManifest(layout.Manifest("U"))) {
    CHECK(entry.domain == "studio");
  }
  // dev/test stay in the field domain.
  for (const auto &entry : LoadManifest(layout.Manifest("test"))) {
    CHECK(entry.domain == "field");
  }
  fs::remove_all(dir);
}

TEST_CASE("scenario config validates and round-trips through kv") {
  auto kv = czsda::KvConfig::FromString("gap = mild\nn_dev = 37\n");
  const ScenarioConfig config = ScenarioConfig::FromKv(kv);
  CHECK(config.gap == "mild");
  CHECK(config.n_dev == 37);
  CHECK(config.n_labeled == 2000);  // default preserved

  const ScenarioConfig round =
      ScenarioConfig::FromKv(czsda::KvConfig::FromString(config.ToKv().Canonical()));
  CHECK(round.gap == "mild");
  CHECK(round.n_dev == 37);

  auto bad = czsda::KvConfig::FromString("gap = enormous\n");
  CHECK_THROWS_AS(ScenarioConfig::FromKv(bad), czsda::ConfigError);
  auto unknown = czsda::KvConfig::FromString("no_such_key = 1\n");
  CHECK_THROWS_AS(ScenarioConfig::FromKv(unknown), czsda::ConfigError);
}

TEST_CASE("target domain transform is invertible with bounded condition") {
  const std::string dir = TempDir("czsda-corpus-cond");
  const auto layout = GenCorpus(TinyScenario(), 23, dir);
  const auto field = czsda::synth::LoadDomainSpec(layout.DomainSpecFile("field"));
  CHECK(czsda::numerics::ConditionNumber(field.channel) < 4.0);
  CHECK(field.tempo == 2);
  CHECK(field.gain == doctest::Approx(0.8));
  const auto studio = czsda::synth::LoadDomainSpec(layout.DomainSpecFile("studio"));
  CHECK(studio.tempo == 1);
  CHECK(field.noise_std == doctest::Approx(3.0 * studio.noise_std));
  fs::remove_all(dir);
}
