#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wlp/kernel.hpp"

namespace wlp {

class Chart;

// Parse a .wlp program. Throws ParseError with a line/column span.
Program parse_program(std::string_view text);
// Canonical text; parse_program(render_program(p)) is structurally equal to p.
std::string render_program(const Program& program);

// A single atom or term, as used for --goal and --query patterns.
Atom parse_atom(std::string_view text);
Term parse_term(std::string_view text);

// One fact per line: pred<TAB>arg1,arg2,...<TAB>value. The value column may be
// omitted, in which case default_value is used. Blank lines and lines starting with
// '#' or '%' are skipped.
std::vector<Axiom> parse_facts_tsv(std::string_view text, const Value& default_value);
std::string render_facts_tsv(const std::vector<Axiom>& facts);

// JSON lines sorted by atom text: {"atom":"reachable(b)","value":0.16}. Triples are
// written as [w,h,z]. Numbers carry 12 significant digits.
std::string render_chart(const Chart& chart);

// Number formatting used for all user-facing numeric output.
std::string format_output(const Value& v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace wlp
