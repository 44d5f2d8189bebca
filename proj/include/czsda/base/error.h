// czsda/base/error.h

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

#ifndef CZSDA_BASE_ERROR_H_
#define CZSDA_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace czsda {

// Error categories map one-to-one onto the CLI exit codes in
// tools/czsda-main.cc, so every subsystem throws one of these.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

// Mismatched tensor shapes or malformed dimensions.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string &msg) : Error("shape error: " + msg) {}
};

// Bad flags, unknown head tags, missing required inputs.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string &msg) : Error("usage error: " + msg) {}
};

// Filesystem failures; message carries the path involved.
class IoError : public Error {
 public:
  explicit IoError(const std::string &msg) : Error("i/o error: " + msg) {}
};

// An unsupervised mode tried to touch ground truth it must not see,
// or a supervised mode lacks the sidecar it requires.
class ContractViolationError : public Error {
 public:
  explicit ContractViolationError(const std::string &msg)
      : Error("contract violation: " + msg) {}
};

// Non-finite gradients, empty feasible sets, and similar optimization
// failures. Carries the parameter or corpus name in the message.
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string &msg)
      : Error("training error: " + msg) {}
};

// CTC target cannot be emitted within the given frame count.
class InfeasibleTargetError : public Error {
 public:
  explicit InfeasibleTargetError(const std::string &msg)
      : Error("infeasible target: " + msg) {}
};

// Instance exceeds a hard enumeration bound (brute-force oracle).
class SizeError : public Error {
 public:
  explicit SizeError(const std::string &msg) : Error("size error: " + msg) {}
};

// Token index outside the language vocabulary.
class VocabError : public Error {
 public:
  explicit VocabError(const std::string &msg) : Error("vocab error: " + msg) {}
};

// Bad configuration value or an empty corpus where one is required.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &msg)
      : Error("config error: " + msg) {}
};

// k-means cannot place the requested number of distinct centroids.
class ClusteringError : public Error {
 public:
  explicit ClusteringError(const std::string &msg)
      : Error("clustering error: " + msg) {}
};

}  // namespace czsda

#endif  // CZSDA_BASE_ERROR_H_
