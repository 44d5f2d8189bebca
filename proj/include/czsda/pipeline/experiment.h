// czsda/pipeline/experiment.h

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

#ifndef CZSDA_PIPELINE_EXPERIMENT_H_
#define CZSDA_PIPELINE_EXPERIMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "czsda/base/kv-config.h"
#include "czsda/pipeline/run.h"

namespace czsda {
namespace pipeline {

// Recipe file (flat key=value):
//   modes      comma list of training modes
//   seeds      comma list of integer seeds
//   threads    max parallel runs (default 4)
//   data_seed  corpus generation seed (default 7)
//   scenario   optional path to a scenario config
//   train.*    any train-config key, applied to every run
struct Recipe {
  std::vector<Mode> modes;
  std::vector<std::uint64_t> seeds;
  int threads = 4;
  std::uint64_t data_seed = 7;
  std::string scenario_path;
  KvConfig train_overrides;

  static Recipe FromKv(const KvConfig &kv);
  static Recipe Default();
};

struct RunSummary {
  Mode mode = Mode::kScratch;
  std::uint64_t seed = 0;
  double dev_cer = 0.0;
  double test_cer = 0.0;
  std::int64_t skipped = 0;
  std::string config_hash;
  std::string final_ckpt;
  std::string run_dir;
  std::optional<std::string> error;  // set when the run failed
};

struct OrderingVerdict {
  std::string description;
  bool pass = false;
  std::string detail;
};

struct RecipeResult {
  std::string data_dir;
  std::vector<RunSummary> runs;                 // recipe order
  std::map<std::string, double> mean_test_cer;  // mode name -> mean over seeds
  std::vector<OrderingVerdict> verdicts;
  bool AllRunsSucceeded() const;
};

// Generates the corpus under <out>/data, trains every (mode, seed) pair
// under <out>/ckpt/<mode>-seed<N>/ (at most |threads| in parallel),
// evaluates dev and test, writes <out>/reports/summary.csv and returns
// the aggregate. A failed run is recorded in its summary slot and the
// remaining runs still execute; the summary preserves partial results.
RecipeResult RunRecipe(const Recipe &recipe, const std::string &out_dir,
                       const ProgressFn &progress = nullptr);

// The comparison table plus pass/fail ordering lines, as printed.
std::string FormatRecipeResult(const RecipeResult &result);

}  // namespace pipeline
}  // namespace czsda

#endif  // CZSDA_PIPELINE_EXPERIMENT_H_
