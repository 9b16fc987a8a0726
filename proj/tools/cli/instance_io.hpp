#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "adcal/instance.hpp"

namespace adcal::cli {

// Line-oriented instance text. Blank lines and '#' comments are ignored;
// tokens are whitespace-separated:
//
//   mechanism ONE|ALL
//   buckets <K>
//   query <id> <num>/<den>          (one per query)
//   ad <id> <query-id> <p> <b> <z>  (one per ad, after all queries)
//
// Parsing checks syntax and ordering only; call validate() for semantics.
// Errors are ParseError prefixed with "<source>:<line>: ".
ProblemInstance parse_instance(std::istream& in,
                               std::string_view source = "<input>");
ProblemInstance parse_instance_text(std::string_view text);
ProblemInstance load_instance(const std::string& path);

// Emits every rational as num/den, so parse(emit(x)) == x.
void emit_instance(std::ostream& out, const ProblemInstance& instance);
std::string emit_instance_text(const ProblemInstance& instance);

}  // namespace adcal::cli
