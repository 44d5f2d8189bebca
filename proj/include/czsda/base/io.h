// czsda/base/io.h

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

#ifndef CZSDA_BASE_IO_H_
#define CZSDA_BASE_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "czsda/numerics/matrix.h"

namespace czsda {
namespace io {

// All binary artifacts (frames, checkpoints, language/domain specs) are
// little-endian regardless of host, written byte by byte so round trips
// are bit-exact everywhere.

void WriteU32(std::ostream &os, std::uint32_t v);
void WriteU64(std::ostream &os, std::uint64_t v);
void WriteF64(std::ostream &os, double v);
void WriteString(std::ostream &os, const std::string &s);  // u32 length + bytes
void WriteMatrixPayload(std::ostream &os, const numerics::Matrix &m);

std::uint32_t ReadU32(std::istream &is);
std::uint64_t ReadU64(std::istream &is);
double ReadF64(std::istream &is);
std::string ReadString(std::istream &is);
numerics::Matrix ReadMatrixPayload(std::istream &is, int rows, int cols);

// Exact magic match or IoError naming |path|.
void ExpectMagic(std::istream &is, const std::string &magic,
                 const std::string &path);

std::string ReadTextFile(const std::string &path);
void WriteTextFile(const std::string &path, const std::string &content);

}  // namespace io
}  // namespace czsda

#endif  // CZSDA_BASE_IO_H_
