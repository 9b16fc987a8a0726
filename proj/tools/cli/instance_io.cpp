#include "instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "adcal/errors.hpp"

namespace adcal::cli {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(std::move(t));
  return out;
}

std::size_t parse_index(const std::string& text, const char* what) {
  std::size_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(std::string("bad ") + what + " '" + text + "'");
  }
  return v;
}

}  // namespace

ProblemInstance parse_instance(std::istream& in, std::string_view source) {
  enum class Stage { kMechanism, kBuckets, kQueries, kAds };
  ProblemInstance inst;
  Stage stage = Stage::kMechanism;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    try {
      const std::string& kw = tok[0];
      auto arity = [&](std::size_t n) {
        if (tok.size() != n) {
          throw ParseError("'" + kw + "' takes " + std::to_string(n - 1) +
                           " fields, got " + std::to_string(tok.size() - 1));
        }
      };
      if (stage == Stage::kMechanism) {
        if (kw != "mechanism") throw ParseError("expected 'mechanism ONE|ALL' first");
        arity(2);
        try {
          inst.mechanism = parse_mechanism(tok[1]);
        } catch (const InvalidArgument& e) {
          throw ParseError(e.what());
        }
        stage = Stage::kBuckets;
      } else if (stage == Stage::kBuckets) {
        if (kw != "buckets") throw ParseError("expected 'buckets <K>' second");
        arity(2);
        inst.buckets = parse_index(tok[1], "bucket count");
        stage = Stage::kQueries;
      } else if (kw == "query") {
        if (stage == Stage::kAds) throw ParseError("query lines must precede ad lines");
        arity(3);
        inst.queries.entries.push_back({tok[1], Rational::parse(tok[2])});
      } else if (kw == "ad") {
        arity(6);
        stage = Stage::kAds;
        inst.ads.push_back({tok[1], tok[2], Rational::parse(tok[3]),
                            Rational::parse(tok[4]), parse_index(tok[5], "bucket")});
      } else {
        throw ParseError("unknown keyword '" + kw + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(std::string(source) + ":" + std::to_string(lineno) + ": " +
                       e.what());
    }
  }
  if (stage == Stage::kMechanism || stage == Stage::kBuckets) {
    throw ParseError(std::string(source) +
                     ": missing 'mechanism' or 'buckets' header");
  }
  return inst;
}

ProblemInstance parse_instance_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_instance(in);
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file " + path);
  return parse_instance(in, path);
}

void emit_instance(std::ostream& out, const ProblemInstance& instance) {
  auto check = [](const std::string& id) {
    if (id.empty() || id.find_first_of(" \t\r\n#") != std::string::npos) {
      throw InvalidArgument("id '" + id + "' cannot be written as a token");
    }
  };
  for (const auto& q : instance.queries.entries) check(q.id);
  for (const auto& a : instance.ads) {
    check(a.id);
    check(a.query);
  }
  out << "mechanism " << to_string(instance.mechanism) << '\n';
  out << "buckets " << instance.buckets << '\n';
  for (const auto& q : instance.queries.entries) {
    out << "query " << q.id << ' ' << q.probability.fraction() << '\n';
  }
  for (const auto& a : instance.ads) {
    out << "ad " << a.id << ' ' << a.query << ' ' << a.ctr.fraction() << ' '
        << a.bid.fraction() << ' ' << a.bucket << '\n';
  }
}

std::string emit_instance_text(const ProblemInstance& instance) {
  std::ostringstream out;
  emit_instance(out, instance);
  return out.str();
}

}  // namespace adcal::cli
