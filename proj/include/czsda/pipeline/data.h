// czsda/pipeline/data.h

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

#ifndef CZSDA_PIPELINE_DATA_H_
#define CZSDA_PIPELINE_DATA_H_

#include <string>
#include <vector>

#include "czsda/ctc/ctc.h"
#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"
#include "czsda/synthlang/corpus.h"

namespace czsda {
namespace pipeline {

struct LoadedUtterance {
  std::string id;
  numerics::Matrix frames;
  ctc::TokenSeq tokens;  // empty tokens + labeled=false when unlabeled
  bool labeled = false;
  std::string language;
  std::string domain;
};

// A manifest materialized in memory; transcripts are mapped to token
// indices through the corpus vocab file of each row's language.
struct LoadedCorpus {
  std::string manifest_path;
  std::vector<LoadedUtterance> utterances;

  int Size() const { return static_cast<int>(utterances.size()); }
  bool Empty() const { return utterances.empty(); }
};

// |corpus_dir| is the directory holding the manifest, the vocab files
// and the frames/ tree.
LoadedCorpus LoadCorpusData(const std::string &corpus_dir,
                            const std::string &manifest_path);

// Vocabulary size (blank included) for one language of a corpus.
int VocabSizeFor(const std::string &corpus_dir, const std::string &language);

// Epoch iterator: Fisher-Yates shuffle per epoch, reshuffles on
// exhaustion. Each corpus gets its own sampler so L and U epochs run
// independently.
class EpochSampler {
 public:
  EpochSampler(int size, numerics::Rng stream);
  int Next();

 private:
  void Reshuffle();
  std::vector<int> order_;
  std::size_t pos_ = 0;
  numerics::Rng rng_;
};

}  // namespace pipeline
}  // namespace czsda

#endif  // CZSDA_PIPELINE_DATA_H_
