// czsda/numerics/rng.h

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

#ifndef CZSDA_NUMERICS_RNG_H_
#define CZSDA_NUMERICS_RNG_H_

#include <cstdint>

namespace czsda {
namespace numerics {

// Splitmix64 stream (Steele, Lea, Flood 2014). Chosen over std engines
// because every draw below is specified down to the bit, so identical
// seeds give identical corpora and parameter trajectories on any
// platform. Split() derives an independent child stream from (state,
// tag) without advancing the parent, which gives each utterance, update
// and stage its own stream regardless of evaluation order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t NextU64();

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi);
  // Uniform integer in [0, n), n > 0; multiply-high range reduction.
  int UniformInt(int n);
  // Standard normal via Box-Muller (one value per call; the sine
  // partner is discarded to keep the state a single word).
  double Gaussian();

  Rng Split(std::uint64_t tag) const;

 private:
  std::uint64_t state_;
};

}  // namespace numerics
}  // namespace czsda

#endif  // CZSDA_NUMERICS_RNG_H_
