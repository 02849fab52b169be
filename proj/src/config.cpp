//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "fabind/config.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fabind {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string &text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key))
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '"
                        + key + "'");
    cfg.values_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueConfig::set(const std::string &key, const std::string &value) {
  values_[key] = value;
}

bool KeyValueConfig::has(const std::string &key) const {
  return values_.count(key) != 0;
}

std::string KeyValueConfig::get_string(const std::string &key,
                                       const std::string &fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  used_.insert(key);
  return it->second;
}

double KeyValueConfig::get_double(const std::string &key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  used_.insert(key);
  const std::string &s = it->second;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': '" + s + "' is not a number");
  return v;
}

int KeyValueConfig::get_int(const std::string &key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  used_.insert(key);
  const std::string &s = it->second;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
  return v;
}

bool KeyValueConfig::get_bool(const std::string &key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    return fallback;
  used_.insert(key);
  if (it->second == "true" || it->second == "1")
    return true;
  if (it->second == "false" || it->second == "0")
    return false;
  throw ConfigError("key '" + key + "': '" + it->second + "' is not a boolean");
}

void KeyValueConfig::check_all_used() const {
  std::string unknown;
  for (const auto &[k, v]: values_)
    if (!used_.count(k))
      unknown += (unknown.empty() ? "" : ", ") + k;
  if (!unknown.empty())
    throw ConfigError("unknown config keys: " + unknown);
}

std::string KeyValueConfig::render() const {
  std::string out;
  for (const auto &[k, v]: values_)
    out += k + "=" + v + "\n";
  return out;
}

}  // namespace fabind
