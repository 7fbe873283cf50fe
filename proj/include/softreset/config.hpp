#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace softreset {

/// Raised on malformed files, bad values, and unknown keys. The message
/// names the offending key.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat "key = value" file with '#' comments; dotted keys express nesting
/// (e.g. "fore.kappa"). Every key must be consumed by a typed getter;
/// leftovers are reported as unknown keys (fail-closed).
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long get_long(const std::string& key, long fallback);
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
  std::vector<double> get_vector(const std::string& key,
                                 const std::vector<double>& fallback);

  /// Overrides (or inserts) a raw value; used by sweeps.
  void set(const std::string& key, const std::string& value);

  /// Throws ConfigError naming the first never-consumed key, if any.
  void check_all_consumed() const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  std::map<std::string, bool> consumed_;
};

}  // namespace softreset
