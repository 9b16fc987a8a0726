#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adcal/rational.hpp"

namespace adcal::cli {

enum class Format { kHuman, kMachine };

// Flat key/value result of one command. The machine form is one "key=value"
// line per datum with rationals as num/den; the human form is an aligned
// table of the same data with decimals next to fractions.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void add(std::string key, std::string value);
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void add(std::string key, const Rational& value);
  void add(std::string key, bool value);
  void add(std::string key, std::uint64_t value);

  const std::string& command() const { return command_; }
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  std::string render(Format format) const;

  // Inverse of render(kMachine).
  static Report parse_machine(std::string_view text);

  friend bool operator==(const Report&, const Report&) = default;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
  std::vector<std::string> human_;  // parallel to entries_
};

}  // namespace adcal::cli
