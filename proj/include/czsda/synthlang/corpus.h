// czsda/synthlang/corpus.h

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

#ifndef CZSDA_SYNTHLANG_CORPUS_H_
#define CZSDA_SYNTHLANG_CORPUS_H_

#include <string>
#include <vector>

#include "czsda/base/kv-config.h"
#include "czsda/synthlang/language.h"

namespace czsda {
namespace synth {

// Scenario layout, after Table 1 of the ZSDA setting:
//   L    labeled,   target language ("alpha"), source domain ("studio")
//   U    unlabeled, source language ("beta"),  target domain ("field")
//   dev  labeled,   target language,           target domain
//   test labeled,   target language,           target domain
// U's ground-truth transcripts go only to the sealed sidecar file.
//
// Scenario config keys (flat key=value; all have defaults):
//   language_distance  close | distant   (prototype sharing vs disjoint)
//   u_domain           target | source   (source = the cross-domain ablation)
//   gap                severe | mild     (domain shift strength)
//   feature_dim, vocab_size, margin, close_offset_ratio,
//   n_labeled, n_unlabeled, n_dev, n_test,
//   token_len_min, token_len_max, dur_min, dur_max, noise_std_base
struct ScenarioConfig {
  std::string language_distance = "close";
  std::string u_domain = "target";
  std::string gap = "severe";
  int feature_dim = 16;
  int vocab_size = 12;  // graphemes per language, blank excluded
  double margin = 2.0;
  double close_offset_ratio = 0.3;
  int n_labeled = 2000;
  int n_unlabeled = 2000;
  int n_dev = 200;
  int n_test = 400;
  int token_len_min = 3;
  int token_len_max = 8;
  int dur_min = 2;
  int dur_max = 5;
  double noise_std_base = 0.25;
  double channel_eps = 0.0;  // 0 = gap preset (severe 0.25, mild 0.1)

  static ScenarioConfig FromKv(const KvConfig &kv);
  KvConfig ToKv() const;
};

// File names inside a corpus directory.
struct CorpusLayout {
  std::string dir;

  std::string Manifest(const std::string &split) const;  // L, U, dev, test
  std::string Sidecar() const { return dir + "/U.sidecar.tsv"; }
  std::string VocabFile(const std::string &language) const;
  std::string LanguageSpecFile(const std::string &language) const;
  std::string DomainSpecFile(const std::string &domain) const;
  std::string FramesDir() const { return dir + "/frames"; }
  std::string ScenarioFile() const { return dir + "/scenario.txt"; }
};

// Generates the full corpus under |dir|: frames files, four manifests,
// the sidecar, vocab files and language/domain spec files. Byte-
// deterministic in (config, seed).
CorpusLayout GenCorpus(const ScenarioConfig &config, std::uint64_t seed,
                       const std::string &dir);

// Frames file: magic "FRAM", u32 T, u32 d, T*d little-endian doubles.
void SaveFrames(const numerics::Matrix &frames, const std::string &path);
numerics::Matrix LoadFrames(const std::string &path);

// Manifest row: id<TAB>relative_path<TAB>language<TAB>domain<TAB>
// transcript-or-dash. Transcripts are space-separated symbols.
struct ManifestEntry {
  std::string id;
  std::string relative_path;
  std::string language;
  std::string domain;
  std::string transcript;  // "-" when unlabeled

  bool Labeled() const { return transcript != "-"; }
};

std::vector<ManifestEntry> LoadManifest(const std::string &path);
void SaveManifest(const std::vector<ManifestEntry> &entries,
                  const std::string &path);

// vocab file: one symbol per line, line 0 = "<blk>".
std::vector<std::string> LoadVocab(const std::string &path);

}  // namespace synth
}  // namespace czsda

#endif  // CZSDA_SYNTHLANG_CORPUS_H_
