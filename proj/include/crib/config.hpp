// Copyright (c) 2026 The crib-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0.txt
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Flat key = value configuration with '#' comments and dotted namespaces
// (medium.nu, protocol.direction, ...). Later assignments override earlier
// ones.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "crib/common.hpp"

namespace crib {

class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<input>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  /// Accepts "key=value" as given on the command line.
  void assign(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  Scalar get_scalar(const std::string& key, Scalar fallback) const;
  int get_int(const std::string& key, int fallback) const;
  /// Comma-separated items, each a number, "lin:start:stop:count" or
  /// "log:start:stop:count" (geometric spacing).
  std::vector<Scalar> get_list(const std::string& key,
                               const std::string& fallback) const;

  /// Throws ConfigError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

  /// FNV-1a over the sorted assignments, output.* keys excluded.
  std::uint64_t hash() const;

 private:
  std::map<std::string, std::string> values_;
};

std::vector<Scalar> parse_list(const std::string& text);

}  // namespace crib
