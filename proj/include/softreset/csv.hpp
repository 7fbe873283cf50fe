#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace softreset {

/// Shortest decimal representation that round-trips the double; locale
/// independent, '.' separator.
std::string format_double(double v);

/// Minimal CSV emitter: fixed header, '\n' newlines, numbers via
/// format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
};

}  // namespace softreset
