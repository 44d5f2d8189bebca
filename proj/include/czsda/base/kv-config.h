// czsda/base/kv-config.h

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

#ifndef CZSDA_BASE_KV_CONFIG_H_
#define CZSDA_BASE_KV_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

namespace czsda {

// Flat `key = value` text config. `#` starts a comment, blank lines are
// ignored. Both scenario files and train configs use this format, with
// CLI flags overlaid last.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig FromFile(const std::string &path);
  static KvConfig FromString(const std::string &text);

  void Set(const std::string &key, const std::string &value);
  bool Has(const std::string &key) const;

  // Getters record the key as consumed so unknown keys can be rejected.
  std::string GetString(const std::string &key, const std::string &fallback) const;
  double GetDouble(const std::string &key, double fallback) const;
  int GetInt(const std::string &key, int fallback) const;
  bool GetBool(const std::string &key, bool fallback) const;

  // Throws ConfigError listing any key no getter ever asked about.
  void CheckAllConsumed(const std::string &what) const;

  // Canonical sorted `key=value` lines; config hashes and provenance
  // files are built from this exact text.
  std::string Canonical() const;
  const std::map<std::string, std::string> &Entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::map<std::string, bool> consumed_;
};

// FNV-1a 64-bit, fixed here rather than std::hash so report rows carry
// the same config hash on every platform.
std::uint64_t Fnv1a64(const std::string &text);
std::string HashHex(const std::string &text);

}  // namespace czsda

#endif  // CZSDA_BASE_KV_CONFIG_H_
