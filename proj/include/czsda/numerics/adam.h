// czsda/numerics/adam.h

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

#ifndef CZSDA_NUMERICS_ADAM_H_
#define CZSDA_NUMERICS_ADAM_H_

#include <cstdint>
#include <map>
#include <string>

#include "czsda/numerics/matrix.h"

namespace czsda {
namespace numerics {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction (Kingma & Ba 2014). Moments are kept per
// named parameter and created lazily on first update; the bias
// correction uses that parameter's own step count, so tensors frozen
// for part of a run warm up correctly when they rejoin.
class AdamState {
 public:
  explicit AdamState(const AdamConfig &config) : config_(config) {}

  // In-place update of |param|. Throws TrainingError carrying |name|
  // if the gradient has non-finite entries.
  void Step(const std::string &name, Matrix *param, const Matrix &grad);

  std::int64_t StepCount(const std::string &name) const;
  std::int64_t TotalSteps() const { return total_steps_; }
  const AdamConfig &Config() const { return config_; }

 private:
  struct Slot {
    Matrix first;    // m
    Matrix second;   // v
    std::int64_t steps = 0;
  };

  AdamConfig config_;
  std::map<std::string, Slot> slots_;
  std::int64_t total_steps_ = 0;
};

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_ADAM_H_
