// czsda/pipeline/experiment.cc

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

#include "czsda/pipeline/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

#include "czsda/base/error.h"
#include "czsda/base/io.h"
#include "czsda/eval/evaluate.h"
#include "czsda/synthlang/corpus.h"

namespace czsda {
namespace pipeline {

namespace {

std::vector<std::string> SplitCommas(const std::string &value) {
  std::vector<std::string> parts;
  std::istringstream is(value);
  std::string part;
  while (std::getline(is, part, ',')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

}  // namespace

Recipe Recipe::FromKv(const KvConfig &kv) {
  Recipe recipe;
  for (const std::string &name : SplitCommas(kv.GetString(
           "modes", "scratch,ssl-zsda,translit-zsda,sup-zsda,"
                    "sup-zsda-curriculum"))) {
    recipe.modes.push_back(ParseMode(name));
  }
  for (const std::string &seed : SplitCommas(kv.GetString("seeds", "1,2,3"))) {
    recipe.seeds.push_back(std::stoull(seed));
  }
  recipe.threads = kv.GetInt("threads", recipe.threads);
  recipe.data_seed = static_cast<std::uint64_t>(kv.GetInt("data_seed", 7));
  recipe.scenario_path = kv.GetString("scenario", "");
  for (const auto &[key, value] : kv.Entries()) {
    if (key.rfind("train.", 0) == 0) {
      (void)kv.GetString(key, "");  // mark consumed
      recipe.train_overrides.Set(key.substr(6), value);
    }
  }
  kv.CheckAllConsumed("recipe");
  if (recipe.modes.empty() || recipe.seeds.empty()) {
    throw ConfigError("recipe needs at least one mode and one seed");
  }
  if (recipe.threads < 1) throw ConfigError("threads must be >= 1");
  return recipe;
}

Recipe Recipe::Default() { return FromKv(KvConfig()); }

bool RecipeResult::AllRunsSucceeded() const {
  for (const RunSummary &run : runs) {
    if (run.error) return false;
  }
  return true;
}

RecipeResult RunRecipe(const Recipe &recipe, const std::string &out_dir,
                       const ProgressFn &progress) {
  namespace fs = std::filesystem;
  RecipeResult result;
  fs::create_directories(out_dir + "/data");
  fs::create_directories(out_dir + "/ckpt");
  fs::create_directories(out_dir + "/reports");

  synth::ScenarioConfig scenario;
  if (!recipe.scenario_path.empty()) {
    scenario = synth::ScenarioConfig::FromKv(
        KvConfig::FromFile(recipe.scenario_path));
  }
  result.data_dir = out_dir + "/data";
  const synth::CorpusLayout layout =
      synth::GenCorpus(scenario, recipe.data_seed, result.data_dir);

  for (Mode mode : recipe.modes) {
    for (std::uint64_t seed : recipe.seeds) {
      RunSummary summary;
      summary.mode = mode;
      summary.seed = seed;
      summary.run_dir =
          out_dir + "/ckpt/" + ModeName(mode) + "-seed" + std::to_string(seed);
      result.runs.push_back(std::move(summary));
    }
  }

  // Runs are independent value-local computations; a bounded worker pool
  // claims them through one atomic counter.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t index = next.fetch_add(1);
      if (index >= result.runs.size()) return;
      RunSummary &run = result.runs[index];
      try {
        KvConfig kv = recipe.train_overrides;
        kv.Set("mode", ModeName(run.mode));
        kv.Set("seed", std::to_string(run.seed));
        const TrainConfig config = TrainConfig::FromKv(kv);
        const RunResult trained =
            RunTraining(config, result.data_dir, run.run_dir, {}, nullptr);

        eval::EvalReport dev = eval::Evaluate(
            trained.final, result.data_dir, layout.Manifest("dev"),
            model::Head::kTarget);
        eval::EvalReport test = eval::Evaluate(
            trained.final, result.data_dir, layout.Manifest("test"),
            model::Head::kTarget);
        run.dev_cer = dev.error_rate;
        run.test_cer = test.error_rate;
        run.skipped = trained.TotalSkipped();
        run.config_hash = config.ConfigHash();
        run.final_ckpt = trained.final_ckpt_path;
        if (progress) {
          char line[160];
          std::snprintf(line, sizeof(line),
                        "run mode=%s seed=%llu dev=%.2f test=%.2f",
                        ModeName(run.mode).c_str(),
                        static_cast<unsigned long long>(run.seed), run.dev_cer,
                        run.test_cer);
          progress(line);
        }
      } catch (const std::exception &err) {
        run.error = err.what();
        if (progress) {
          progress("run mode=" + ModeName(run.mode) + " seed=" +
                   std::to_string(run.seed) + " FAILED: " + err.what());
        }
      }
    }
  };
  const int thread_count = std::max(
      1, std::min<int>(recipe.threads, static_cast<int>(result.runs.size())));
  std::vector<std::thread> threads;
  threads.reserve(thread_count);
  for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (std::thread &thread : threads) thread.join();

  // Aggregate means over seeds per mode (successful runs only).
  std::map<std::string, std::pair<double, int>> accum;
  for (const RunSummary &run : result.runs) {
    if (run.error) continue;
    auto &[sum, count] = accum[ModeName(run.mode)];
    sum += run.test_cer;
    ++count;
  }
  for (const auto &[mode, pair] : accum) {
    if (pair.second > 0) result.mean_test_cer[mode] = pair.first / pair.second;
  }

  auto mean_of = [&result](const std::string &mode) -> std::optional<double> {
    auto it = result.mean_test_cer.find(mode);
    if (it == result.mean_test_cer.end()) return std::nullopt;
    return it->second;
  };
  const auto translit = mean_of("translit-zsda");
  const auto ssl = mean_of("ssl-zsda");
  const auto scratch = mean_of("scratch");
  const auto sup_curr = mean_of("sup-zsda-curriculum");
  char detail[160];
  if (translit && ssl) {
    OrderingVerdict verdict;
    verdict.description = "translit-zsda < ssl-zsda by more than 1 CER point";
    verdict.pass = *translit < *ssl - 1.0;
    std::snprintf(detail, sizeof(detail), "%.2f vs %.2f", *translit, *ssl);
    verdict.detail = detail;
    result.verdicts.push_back(verdict);
  }
  if (ssl && scratch) {
    OrderingVerdict verdict;
    verdict.description = "ssl-zsda < scratch by more than 1 CER point";
    verdict.pass = *ssl < *scratch - 1.0;
    std::snprintf(detail, sizeof(detail), "%.2f vs %.2f", *ssl, *scratch);
    verdict.detail = detail;
    result.verdicts.push_back(verdict);
  }
  if (sup_curr && translit) {
    OrderingVerdict verdict;
    verdict.description =
        "sup-zsda-curriculum within 2 CER points of translit-zsda";
    verdict.pass = std::fabs(*sup_curr - *translit) <= 2.0;
    std::snprintf(detail, sizeof(detail), "%.2f vs %.2f", *sup_curr, *translit);
    verdict.detail = detail;
    result.verdicts.push_back(verdict);
  }

  // Summary CSV over all runs, failures marked.
  std::string csv = "mode,seed,dev_cer,test_cer,skipped,config,status\n";
  for (const RunSummary &run : result.runs) {
    char line[320];
    if (run.error) {
      std::snprintf(line, sizeof(line), "%s,%llu,,,,,FAILED\n",
                    ModeName(run.mode).c_str(),
                    static_cast<unsigned long long>(run.seed));
    } else {
      std::snprintf(line, sizeof(line), "%s,%llu,%.4f,%.4f,%lld,%s,ok\n",
                    ModeName(run.mode).c_str(),
                    static_cast<unsigned long long>(run.seed), run.dev_cer,
                    run.test_cer, static_cast<long long>(run.skipped),
                    run.config_hash.c_str());
    }
    csv += line;
  }
  io::WriteTextFile(out_dir + "/reports/summary.csv", csv);
  return result;
}

std::string FormatRecipeResult(const RecipeResult &result) {
  std::string out;
  char line[200];
  out += "mode                 seed  dev_cer  test_cer  skipped\n";
  for (const RunSummary &run : result.runs) {
    if (run.error) {
      std::snprintf(line, sizeof(line), "%-20s %4llu  FAILED: %s\n",
                    ModeName(run.mode).c_str(),
                    static_cast<unsigned long long>(run.seed),
                    run.error->c_str());
    } else {
      std::snprintf(line, sizeof(line), "%-20s %4llu  %7.2f  %8.2f  %7lld\n",
                    ModeName(run.mode).c_str(),
                    static_cast<unsigned long long>(run.seed), run.dev_cer,
                    run.test_cer, static_cast<long long>(run.skipped));
    }
    out += line;
  }
  out += "\nmean test CER per mode:\n";
  for (const auto &[mode, cer] : result.mean_test_cer) {
    std::snprintf(line, sizeof(line), "  %-20s %6.2f\n", mode.c_str(), cer);
    out += line;
  }
  for (const auto &verdict : result.verdicts) {
    std::snprintf(line, sizeof(line), "%s: %s (%s)\n",
                  verdict.pass ? "PASS" : "FAIL",
                  verdict.description.c_str(), verdict.detail.c_str());
    out += line;
  }
  return out;
}

}  // namespace pipeline
}  // namespace czsda
