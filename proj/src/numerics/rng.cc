// czsda/numerics/rng.cc

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

#include "czsda/numerics/rng.h"

#include <cmath>

#include "czsda/base/error.h"

namespace czsda {
namespace numerics {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Splitmix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t Rng::NextU64() {
  state_ += kGolden;
  return Mix(state_);
}

double Rng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

int Rng::UniformInt(int n) {
  if (n <= 0) throw UsageError("UniformInt needs n > 0");
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(NextU64()) * static_cast<std::uint64_t>(n);
  return static_cast<int>(wide >> 64);
}

double Rng::Gaussian() {
  double u1 = Uniform();
  while (u1 == 0.0) u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Rng Rng::Split(std::uint64_t tag) const {
  // Child seed hashes (state, tag) through two finalizer rounds so
  // sibling streams with adjacent tags do not correlate.
  return Rng(Mix(state_ ^ Mix(tag + kGolden)));
}

}  // namespace numerics
}  // namespace czsda
