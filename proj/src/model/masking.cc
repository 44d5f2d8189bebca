// czsda/model/masking.cc

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

#include "czsda/model/masking.h"

#include <algorithm>

#include "czsda/base/error.h"

namespace czsda {
namespace model {

int MaskedFrames::TimeMaskedCount() const {
  int count = 0;
  for (std::uint8_t flag : time_masked) count += flag;
  return count;
}

MaskedFrames MaskAugmentTracked(const numerics::Matrix &frames,
                                const MaskSpec &spec, numerics::Rng *rng) {
  if (spec.time_span < 1 || spec.channel_span < 1) {
    throw ConfigError("mask spans must be >= 1");
  }
  const int rows = frames.Rows();
  const int cols = frames.Cols();

  MaskedFrames out;
  out.frames = frames;
  out.time_masked.assign(rows, 0);

  for (int t = 0; t < rows; ++t) {
    if (rng->Uniform() < spec.time_mask_prob) {
      const int end = std::min(rows, t + spec.time_span);
      for (int u = t; u < end; ++u) out.time_masked[u] = 1;
    }
  }
  std::vector<std::uint8_t> channel_masked(cols, 0);
  for (int c = 0; c < cols; ++c) {
    if (rng->Uniform() < spec.channel_mask_prob) {
      const int end = std::min(cols, c + spec.channel_span);
      for (int u = c; u < end; ++u) channel_masked[u] = 1;
    }
  }

  for (int t = 0; t < rows; ++t) {
    double *row = out.frames.RowData(t);
    if (out.time_masked[t]) {
      std::fill(row, row + cols, spec.fill_value);
      continue;
    }
    for (int c = 0; c < cols; ++c) {
      if (channel_masked[c]) row[c] = spec.fill_value;
    }
  }
  return out;
}

numerics::Matrix MaskAugment(const numerics::Matrix &frames,
                             const MaskSpec &spec, numerics::Rng *rng) {
  return MaskAugmentTracked(frames, spec, rng).frames;
}

}  // namespace model
}  // namespace czsda
