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

#include "crib/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace crib {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Scalar to_scalar(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  Scalar v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + what + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError("'" + what + "': expected a number, got '" + text + "'");
  return v;
}

std::vector<Scalar> parse_range(const std::string& t) {
  std::vector<std::string> parts;
  std::stringstream ss(t);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
  if (parts.size() != 4) throw ConfigError("range must be kind:start:stop:count");
  const Scalar a = to_scalar(parts[1], t), b = to_scalar(parts[2], t);
  const Scalar nc = to_scalar(parts[3], t);
  if (nc < 1 || nc != std::floor(nc)) throw ConfigError("range count must be >= 1");
  const int n = static_cast<int>(nc);
  const bool geometric = parts[0] == "log";
  if (geometric && !(a > 0 && b > 0))
    throw ConfigError("geometric range needs positive bounds");
  std::vector<Scalar> out(n);
  for (int i = 0; i < n; ++i) {
    const Scalar f = n == 1 ? 0 : static_cast<Scalar>(i) / (n - 1);
    out[i] = geometric ? a * std::pow(b / a, f) : a + (b - a) * f;
  }
  if (n > 1) out.back() = b;
  return out;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(number) +
                        ": expected 'key = value'");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (key.empty() || key.find_first_of(" \t=") != std::string::npos)
    throw ConfigError("invalid config key '" + key + "'");
  values_[key] = value;
}

void Config::assign(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

Scalar Config::get_scalar(const std::string& key, Scalar fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : to_scalar(it->second, key);
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const Scalar v = to_scalar(it->second, key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError("'" + key + "': expected an integer");
  return static_cast<int>(v);
}

std::vector<Scalar> parse_list(const std::string& text) {
  const std::string t = trim(text);
  std::vector<Scalar> out;
  std::stringstream ss(t);
  for (std::string p; std::getline(ss, p, ',');) {
    p = trim(p);
    if (p.empty()) continue;
    if (p.rfind("lin:", 0) == 0 || p.rfind("log:", 0) == 0) {
      const auto range = parse_range(p);
      out.insert(out.end(), range.begin(), range.end());
    } else {
      out.push_back(to_scalar(p, t));
    }
  }
  if (out.empty()) throw ConfigError("empty parameter list");
  return out;
}

std::vector<Scalar> Config::get_list(const std::string& key,
                                     const std::string& fallback) const {
  try {
    return parse_list(get_string(key, fallback));
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown config key '" + key + "'");
}

std::uint64_t Config::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  for (const auto& [key, value] : values_) {
    if (key.rfind("output.", 0) == 0) continue;
    mix(key);
    mix("=");
    mix(value);
    mix("\n");
  }
  return h;
}

}  // namespace crib
