#pragma once

#include <stdexcept>
#include <string>

#include "sparqlstat/parse.hpp"
#include "sparqlstat/serialize.hpp"

namespace sparqlstat::testing {

inline Query must_parse(const std::string& text) {
    ParseResult r = parse_query(text);
    if (auto* err = std::get_if<ParseError>(&r)) {
        throw std::runtime_error("parse failed: " + err->message + " in: " + text);
    }
    return std::move(std::get<Query>(r));
}

/// Body pattern of a query given as text; the usual way tests build patterns.
inline PatternPtr body_of(const std::string& text) {
    Query q = must_parse(text);
    return std::move(q.body);
}

/// Wraps a bare group "{ ... }" into a query and returns its body.
inline PatternPtr pat(const std::string& group) {
    return body_of("SELECT * WHERE " + group);
}

}  // namespace sparqlstat::testing
