#pragma once

#include <optional>
#include <string>

namespace sparqlstat {

enum class TermKind { Iri, Literal, BlankNode, Variable };

/// An RDF term or query variable. Variables carry their own kind; the
/// question-mark prefix is concrete syntax only. For literals, language tag
/// and datatype IRI are mutually exclusive.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string lexical;
    std::string lang;      // literals only, "" if absent
    std::string datatype;  // literals only, "" if absent

    static Term iri(std::string value);
    static Term literal(std::string value, std::string lang = "",
                        std::string datatype = "");
    static Term blank(std::string label);
    static Term variable(std::string name);

    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_iri() const { return kind == TermKind::Iri; }
    bool is_literal() const { return kind == TermKind::Literal; }
    bool is_blank() const { return kind == TermKind::BlankNode; }
    /// Constants are IRIs and literals; blank nodes and variables are not.
    bool is_constant() const { return is_iri() || is_literal(); }
    /// Literal whose datatype is one of the canonicalized numeric types.
    bool is_numeric() const;

    bool operator==(const Term& o) const = default;
    bool operator<(const Term& o) const;

    /// Stable text key, also used for hashing and set ordering.
    std::string key() const;
};

/// Canonical decimal form of a numeric lexical ("05.10" -> "5.1",
/// "1e2" -> "100"). Returns nullopt if the input is not a valid
/// SPARQL 1.0 numeric literal.
std::optional<std::string> canonical_decimal(const std::string& lexical);

/// Exact value comparison of two canonical decimal strings (-1, 0, 1).
int compare_decimal(const std::string& a, const std::string& b);

/// A triple pattern over (I∪L∪V) x (I∪V) x (I∪L∪V).
struct TriplePattern {
    Term subject;
    Term predicate;
    Term object;

    bool operator==(const TriplePattern& o) const = default;
};

/// Positional validity for triple patterns (blank nodes excluded).
bool valid_triple_pattern(const TriplePattern& tp);

}  // namespace sparqlstat
