#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rdmc {

// Flat `key = value` configuration document. Lines starting with '#' (and
// blank lines) are ignored; keys are unique. Readers pull typed values and
// record which keys they touched so unknown keys can be rejected afterwards,
// catching typos before an expensive run.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list; surrounding whitespace per element is trimmed.
  std::vector<std::string> get_list(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;

  // Throws if any key was never read by one of the getters above.
  void reject_unknown_keys() const;

 private:
  std::string origin_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> touched_;

  const std::string& raw(const std::string& key) const;
};

}  // namespace rdmc
