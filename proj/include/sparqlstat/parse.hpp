#pragma once

#include <string>
#include <variant>

#include "sparqlstat/pattern.hpp"

namespace sparqlstat {

enum class ParseErrorKind {
    SyntaxError,    // malformed or outside the supported grammar
    Unsupported11,  // recognizably SPARQL 1.1 (or Update) constructs
    NonSelectForm,  // ASK / CONSTRUCT / DESCRIBE
};

struct ParseError {
    ParseErrorKind kind = ParseErrorKind::SyntaxError;
    std::string message;
    std::size_t position = 0;  // byte offset into the input
};

const char* to_string(ParseErrorKind k);

using ParseResult = std::variant<Query, ParseError>;

/// Parse a SPARQL 1.0 SELECT query into the pattern algebra. PREFIX/BASE
/// are expanded locally; DISTINCT/REDUCED, dataset clauses and solution
/// modifiers are accepted and ignored. Blank nodes in query text are
/// rejected.
ParseResult parse_query(const std::string& text);

inline bool parse_ok(const ParseResult& r) { return std::holds_alternative<Query>(r); }

}  // namespace sparqlstat
