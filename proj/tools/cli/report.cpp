#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "adcal/errors.hpp"

namespace adcal::cli {

void Report::add(std::string key, std::string value) {
  if (key.find_first_of("=\n") != std::string::npos ||
      value.find('\n') != std::string::npos) {
    throw InvalidArgument("report key/value cannot hold '=' or newlines: " + key);
  }
  human_.push_back(value);
  entries_.emplace_back(std::move(key), std::move(value));
}

void Report::add(std::string key, const Rational& value) {
  add(std::move(key), value.fraction());
  if (!value.is_integer()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value.to_double());
    human_.back() = value.str() + " (" + buf + ")";
  } else {
    human_.back() = value.str();
  }
}

void Report::add(std::string key, bool value) {
  add(std::move(key), std::string(value ? "true" : "false"));
}

void Report::add(std::string key, std::uint64_t value) {
  add(std::move(key), std::to_string(value));
}

std::string Report::render(Format format) const {
  std::ostringstream out;
  if (format == Format::kMachine) {
    out << "command=" << command_ << '\n';
    for (const auto& [k, v] : entries_) out << k << '=' << v << '\n';
    return out.str();
  }
  std::size_t width = 0;
  for (const auto& e : entries_) width = std::max(width, e.first.size());
  out << command_ << '\n';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out << "  " << entries_[i].first
        << std::string(width - entries_[i].first.size() + 2, ' ') << human_[i]
        << '\n';
  }
  return out.str();
}

Report Report::parse_machine(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("command=", 0) != 0) {
    throw ParseError("machine report must start with command=");
  }
  Report r(line.substr(8));
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("report line without '=': " + line);
    const std::string value = line.substr(eq + 1);
    Rational parsed;
    bool is_fraction = false;
    if (value.find('/') != std::string::npos) {
      try {
        parsed = Rational::parse(value);
        is_fraction = parsed.fraction() == value;
      } catch (const ParseError&) {
      }
    }
    if (is_fraction) {
      r.add(line.substr(0, eq), parsed);
    } else {
      r.add(line.substr(0, eq), value);
    }
  }
  return r;
}

}  // namespace adcal::cli
