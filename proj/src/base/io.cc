// czsda/base/io.cc

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

#include "czsda/base/io.h"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "czsda/base/error.h"

namespace czsda {
namespace io {

namespace {

void PutBytes(std::ostream &os, std::uint64_t v, int n) {
  char buf[8];
  for (int i = 0; i < n; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(buf, n);
}

std::uint64_t GetBytes(std::istream &is, int n) {
  char buf[8];
  is.read(buf, n);
  if (!is) throw IoError("unexpected end of stream");
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  }
  return v;
}

}  // namespace

void WriteU32(std::ostream &os, std::uint32_t v) { PutBytes(os, v, 4); }
void WriteU64(std::ostream &os, std::uint64_t v) { PutBytes(os, v, 8); }

void WriteF64(std::ostream &os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  PutBytes(os, bits, 8);
}

void WriteString(std::ostream &os, const std::string &s) {
  WriteU32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void WriteMatrixPayload(std::ostream &os, const numerics::Matrix &m) {
  for (double v : m.Flat()) WriteF64(os, v);
}

std::uint32_t ReadU32(std::istream &is) {
  return static_cast<std::uint32_t>(GetBytes(is, 4));
}

std::uint64_t ReadU64(std::istream &is) { return GetBytes(is, 8); }

double ReadF64(std::istream &is) {
  const std::uint64_t bits = GetBytes(is, 8);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::string ReadString(std::istream &is) {
  const std::uint32_t len = ReadU32(is);
  if (len > (1u << 20)) throw IoError("string field implausibly long");
  std::string s(len, '\0');
  is.read(s.data(), len);
  if (!is) throw IoError("unexpected end of stream in string field");
  return s;
}

numerics::Matrix ReadMatrixPayload(std::istream &is, int rows, int cols) {
  numerics::Matrix m(rows, cols);
  for (double &v : m.Flat()) v = ReadF64(is);
  return m;
}

void ExpectMagic(std::istream &is, const std::string &magic,
                 const std::string &path) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(magic.size()));
  if (!is || got != magic) {
    throw IoError("bad magic in " + path + " (expected \"" + magic + "\")");
  }
}

std::string ReadTextFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string &path, const std::string &content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << content;
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace io
}  // namespace czsda
