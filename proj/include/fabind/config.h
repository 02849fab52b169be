//
// Project fabind-desk - Copyright 2026 fabind-desk authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef FABIND_CONFIG_H_
#define FABIND_CONFIG_H_

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace fabind {

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Flat key=value text. Blank lines and lines starting with '#' are ignored.
// Every read marks its key; check_all_used() rejects leftovers.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string &text);
  static KeyValueConfig read_file(const std::string &path);

  void set(const std::string &key, const std::string &value);
  bool has(const std::string &key) const;

  std::string get_string(const std::string &key, const std::string &fallback) const;
  double get_double(const std::string &key, double fallback) const;
  int get_int(const std::string &key, int fallback) const;
  bool get_bool(const std::string &key, bool fallback) const;

  void check_all_used() const;
  std::string render() const;
  const std::map<std::string, std::string> &values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace fabind

#endif  // FABIND_CONFIG_H_
