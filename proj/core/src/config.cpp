#include "rdmc/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rdmc {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config config;
  config.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": empty key");
    if (!config.values_.emplace(key, value).second)
      throw std::runtime_error(origin + " line " + std::to_string(line_no) +
                               ": duplicate key '" + key + "'");
  }
  return config;
}

const std::string& Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::runtime_error(origin_ + ": missing required key '" + key + "'");
  touched_[key] = true;
  return it->second;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing data");
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key + "': bad number '" + v + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int out = static_cast<int>(v);
  if (static_cast<double>(out) != v)
    throw std::runtime_error(origin_ + ": key '" + key + "' must be an integer");
  return out;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint64(const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    unsigned long long out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing data");
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error(origin_ + ": key '" + key +
                             "': bad unsigned integer '" + v + "'");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error(origin_ + ": key '" + key + "': bad boolean '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
  const std::string& v = raw(key);
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : get_list(key)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing data");
    } catch (const std::exception&) {
      throw std::runtime_error(origin_ + ": key '" + key + "': bad number '" +
                               item + "'");
    }
  }
  return out;
}

void Config::reject_unknown_keys() const {
  for (const auto& [key, value] : values_) {
    (void)value;
    if (!touched_.count(key))
      throw std::runtime_error(origin_ + ": unknown key '" + key + "'");
  }
}

}  // namespace rdmc
