#include "softreset/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace softreset {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  }
}

}  // namespace

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    if (cfg.kv_.count(key)) {
      throw ConfigError("config key '" + key + "' given twice");
    }
    cfg.kv_[key] = val;
    cfg.consumed_[key] = false;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  consumed_[key] = true;
  return it->second;
}

std::string Config::require_string(const std::string& key) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
  consumed_[key] = true;
  return it->second;
}

double Config::get_double(const std::string& key, double fallback) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  consumed_[key] = true;
  return parse_double(key, it->second);
}

long Config::get_long(const std::string& key, long fallback) {
  const double d = get_double(key, static_cast<double>(fallback));
  const long l = static_cast<long>(d);
  if (static_cast<double>(l) != d) {
    throw ConfigError("config key '" + key + "': expected an integer");
  }
  return l;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  consumed_[key] = true;
  std::uint64_t out = 0;
  const auto& v = it->second;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer");
  }
  return out;
}

std::vector<double> Config::get_vector(const std::string& key,
                                       const std::vector<double>& fallback) {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  consumed_[key] = true;
  std::vector<double> out;
  std::istringstream is(it->second);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(key, tok));
  if (out.empty()) {
    throw ConfigError("config key '" + key + "': expected numbers");
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
  consumed_[key] = false;
}

void Config::check_all_consumed() const {
  for (const auto& [key, used] : consumed_) {
    if (!used) throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace softreset
