// czsda/model/ema.cc

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

#include "czsda/model/ema.h"

#include "czsda/base/error.h"

namespace czsda {
namespace model {

EmaShadow MakeEmaShadow(const ModelParams &student, double decay) {
  if (decay <= 0.0 || decay >= 1.0) {
    throw ConfigError("ema decay must lie strictly inside (0, 1), got " +
                      std::to_string(decay));
  }
  return EmaShadow{student, decay};
}

void EmaBlend(numerics::Matrix *shadow, const numerics::Matrix &student,
              double decay) {
  numerics::CheckSameShape(*shadow, student, "ema blend");
  double *s = shadow->Data();
  const double *p = student.Data();
  for (std::size_t i = 0; i < shadow->Size(); ++i) {
    s[i] = decay * s[i] + (1.0 - decay) * p[i];
  }
}

void EmaUpdate(EmaShadow *shadow, const ModelParams &student) {
  if (!SameShapes(shadow->params, student)) {
    throw ShapeError("ema shadow and student disagree on parameter shapes");
  }
  std::vector<numerics::Matrix *> shadow_tensors;
  ForEachParam(&shadow->params,
               [&shadow_tensors](const std::string &, numerics::Matrix *m) {
                 shadow_tensors.push_back(m);
               });
  std::size_t index = 0;
  const double decay = shadow->decay;
  ForEachParam(student, [&](const std::string &, const numerics::Matrix &m) {
    EmaBlend(shadow_tensors[index++], m, decay);
  });
}

}  // namespace model
}  // namespace czsda
