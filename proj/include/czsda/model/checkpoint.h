// czsda/model/checkpoint.h

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

#ifndef CZSDA_MODEL_CHECKPOINT_H_
#define CZSDA_MODEL_CHECKPOINT_H_

#include <optional>
#include <string>

#include "czsda/model/ema.h"
#include "czsda/model/model.h"

namespace czsda {
namespace model {

// On-disk model state. Format (all integers and floats little-endian):
//   magic "CZSDA1"
//   u32 feature_dim, u32 context_radius, u32 encoder_layers
//   u32 vocab_target, u32 vocab_source, u32 ssl_clusters
//   per encoder layer: u32 in, u32 out
//   u8 has_ema (f64 decay follows when set)
//   u8 has_codebook (u32 rows, u32 cols follow when set)
//   u32 tensor_count, then per tensor:
//     u32 name length, name bytes, u64 rows, u64 cols, rows*cols f64
// Student tensors come first in ForEachParam order, then "ema."-prefixed
// shadow tensors, then "ssl_codebook". Save followed by Load is
// bit-exact.
struct Checkpoint {
  ModelParams params;
  std::optional<EmaShadow> ema;
  std::optional<numerics::Matrix> ssl_codebook;
};

void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace model
}  // namespace czsda

#endif  // CZSDA_MODEL_CHECKPOINT_H_
