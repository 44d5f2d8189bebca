// czsda/pipeline/data.cc

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

#include "czsda/pipeline/data.h"

#include <map>
#include <utility>

#include "czsda/base/error.h"

namespace czsda {
namespace pipeline {

LoadedCorpus LoadCorpusData(const std::string &corpus_dir,
                            const std::string &manifest_path) {
  const synth::CorpusLayout layout{corpus_dir};
  const auto entries = synth::LoadManifest(manifest_path);

  std::map<std::string, std::vector<std::string>> vocabs;
  auto vocab_for = [&](const std::string &language)
      -> const std::vector<std::string> & {
    auto it = vocabs.find(language);
    if (it == vocabs.end()) {
      it = vocabs.emplace(language, synth::LoadVocab(layout.VocabFile(language)))
               .first;
    }
    return it->second;
  };

  LoadedCorpus corpus;
  corpus.manifest_path = manifest_path;
  corpus.utterances.reserve(entries.size());
  for (const auto &entry : entries) {
    LoadedUtterance utt;
    utt.id = entry.id;
    utt.language = entry.language;
    utt.domain = entry.domain;
    utt.frames = synth::LoadFrames(corpus_dir + "/" + entry.relative_path);
    utt.labeled = entry.Labeled();
    if (utt.labeled) {
      utt.tokens = synth::TokensFromSymbols(vocab_for(entry.language),
                                            entry.transcript);
    }
    corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

int VocabSizeFor(const std::string &corpus_dir, const std::string &language) {
  const synth::CorpusLayout layout{corpus_dir};
  return static_cast<int>(synth::LoadVocab(layout.VocabFile(language)).size());
}

EpochSampler::EpochSampler(int size, numerics::Rng stream)
    : order_(static_cast<std::size_t>(size)), rng_(stream) {
  if (size < 1) throw ConfigError("sampler over an empty corpus");
  for (int i = 0; i < size; ++i) order_[i] = i;
  Reshuffle();
}

void EpochSampler::Reshuffle() {
  for (int i = static_cast<int>(order_.size()) - 1; i > 0; --i) {
    const int j = rng_.UniformInt(i + 1);
    std::swap(order_[i], order_[j]);
  }
  pos_ = 0;
}

int EpochSampler::Next() {
  if (pos_ == order_.size()) Reshuffle();
  return order_[pos_++];
}

}  // namespace pipeline
}  // namespace czsda
