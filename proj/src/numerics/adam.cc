// czsda/numerics/adam.cc

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

#include "czsda/numerics/adam.h"

#include <cmath>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

void AdamState::Step(const std::string &name, Matrix *param,
                     const Matrix &grad) {
  CheckSameShape(*param, grad, "adam step for " + name);
  if (!grad.AllFinite()) {
    throw TrainingError("non-finite gradient for parameter " + name);
  }

  Slot &slot = slots_[name];
  if (slot.steps == 0) {
    slot.first = Matrix(param->Rows(), param->Cols());
    slot.second = Matrix(param->Rows(), param->Cols());
  }
  slot.steps += 1;
  total_steps_ += 1;

  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(slot.steps));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(slot.steps));

  double *p = param->Data();
  double *m = slot.first.Data();
  double *v = slot.second.Data();
  const double *g = grad.Data();
  for (std::size_t i = 0; i < param->Size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * g[i];
    v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
    const double mhat = m[i] / corr1;
    const double vhat = v[i] / corr2;
    p[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
  }
}

std::int64_t AdamState::StepCount(const std::string &name) const {
  auto it = slots_.find(name);
  return it == slots_.end() ? 0 : it->second.steps;
}

}  // namespace numerics
}  // namespace czsda
