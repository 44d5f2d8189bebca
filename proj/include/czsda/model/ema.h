// czsda/model/ema.h

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

#ifndef CZSDA_MODEL_EMA_H_
#define CZSDA_MODEL_EMA_H_

#include "czsda/model/model.h"

namespace czsda {
namespace model {

// Teacher copy updated as shadow = decay * shadow + (1 - decay) * student
// after every student step.
struct EmaShadow {
  ModelParams params;
  double decay = 0.999;
};

EmaShadow MakeEmaShadow(const ModelParams &student, double decay);

// Convex combination of every tensor. Throws ShapeError on mismatch.
void EmaUpdate(EmaShadow *shadow, const ModelParams &student);

// Single-tensor version, shared by EmaUpdate and directly testable:
// shadow = decay * shadow + (1 - decay) * student.
void EmaBlend(numerics::Matrix *shadow, const numerics::Matrix &student,
              double decay);

}  // namespace model
}  // namespace czsda

#endif  // CZSDA_MODEL_EMA_H_
