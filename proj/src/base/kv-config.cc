// czsda/base/kv-config.cc

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

#include "czsda/base/kv-config.h"

#include <cstdio>
#include <sstream>

#include "czsda/base/error.h"
#include "czsda/base/io.h"

namespace czsda {

namespace {

std::string Strip(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KvConfig KvConfig::FromFile(const std::string &path) {
  return FromString(io::ReadTextFile(path));
}

KvConfig KvConfig::FromString(const std::string &text) {
  KvConfig config;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = Strip(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        " is not key=value: \"" + line + "\"");
    }
    config.Set(Strip(line.substr(0, eq)), Strip(line.substr(eq + 1)));
  }
  return config;
}

void KvConfig::Set(const std::string &key, const std::string &value) {
  if (key.empty()) throw ConfigError("empty config key");
  entries_[key] = value;
}

bool KvConfig::Has(const std::string &key) const {
  return entries_.count(key) != 0;
}

std::string KvConfig::GetString(const std::string &key,
                                const std::string &fallback) const {
  consumed_[key] = true;
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KvConfig::GetDouble(const std::string &key, double fallback) const {
  consumed_[key] = true;
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception &) {
    throw ConfigError("key " + key + " is not a number: " + it->second);
  }
}

int KvConfig::GetInt(const std::string &key, int fallback) const {
  consumed_[key] = true;
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception &) {
    throw ConfigError("key " + key + " is not an integer: " + it->second);
  }
}

bool KvConfig::GetBool(const std::string &key, bool fallback) const {
  consumed_[key] = true;
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string &v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key " + key + " is not a boolean: " + v);
}

void KvConfig::CheckAllConsumed(const std::string &what) const {
  std::string unknown;
  for (const auto &[key, value] : entries_) {
    if (!consumed_.count(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) {
    throw ConfigError("unknown " + what + " keys: " + unknown);
  }
}

std::string KvConfig::Canonical() const {
  std::string out;
  for (const auto &[key, value] : entries_) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

std::uint64_t Fnv1a64(const std::string &text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string HashHex(const std::string &text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(text)));
  return std::string(buf);
}

}  // namespace czsda
