// czsda/model/masking.h

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

#ifndef CZSDA_MODEL_MASKING_H_
#define CZSDA_MODEL_MASKING_H_

#include <cstdint>
#include <vector>

#include "czsda/numerics/matrix.h"
#include "czsda/numerics/rng.h"

namespace czsda {
namespace model {

// Time and channel span masking over a T×d frame matrix. Every frame
// index t may start a mask of time_span frames with probability
// time_mask_prob; channels likewise along the feature axis. Spans may
// overlap and are clipped at the edges.
struct MaskSpec {
  double time_mask_prob = 0.065;
  int time_span = 3;
  double channel_mask_prob = 0.05;
  int channel_span = 2;
  double fill_value = 0.0;

  bool Disabled() const {
    return time_mask_prob <= 0.0 && channel_mask_prob <= 0.0;
  }
};

struct MaskedFrames {
  numerics::Matrix frames;
  // 1 where the row was covered by a time mask; channel masks corrupt
  // the input but do not mark prediction positions.
  std::vector<std::uint8_t> time_masked;

  int TimeMaskedCount() const;
};

// Draw order is fixed: one uniform per frame index (time starts), then
// one per channel index (channel starts), so a given rng stream always
// produces the same pattern. The input is not mutated.
MaskedFrames MaskAugmentTracked(const numerics::Matrix &frames,
                                const MaskSpec &spec, numerics::Rng *rng);

numerics::Matrix MaskAugment(const numerics::Matrix &frames,
                             const MaskSpec &spec, numerics::Rng *rng);

}  // namespace model
}  // namespace czsda

#endif  // CZSDA_MODEL_MASKING_H_
