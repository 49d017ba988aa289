#include "sparqlstat/serialize.hpp"

namespace sparqlstat {

namespace {

std::string escape_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string atom_to_sparql(const AtomicConstraint& a) {
    auto v = [](const std::string& name) { return "?" + name; };
    auto str_const = [](const std::string& s) { return escape_string(s); };
    switch (a.kind) {
        case AtomKind::Bound:
            return (a.negated ? "!bound(" : "bound(") + v(a.var) + ")";
        case AtomKind::EqConst:
            return v(a.var) + (a.negated ? " != " : " = ") + term_to_sparql(a.constant);
        case AtomKind::EqVar:
            return v(a.var) + (a.negated ? " != " : " = ") + v(a.var2);
        case AtomKind::LtConst: {
            std::string core = v(a.var) + " < " + term_to_sparql(a.constant);
            return a.negated ? "!(" + core + ")" : core;
        }
        case AtomKind::LeqConst: {
            std::string core = v(a.var) + " <= " + term_to_sparql(a.constant);
            return a.negated ? "!(" + core + ")" : core;
        }
        case AtomKind::GtConst: {
            std::string core = v(a.var) + " > " + term_to_sparql(a.constant);
            return a.negated ? "!(" + core + ")" : core;
        }
        case AtomKind::GeqConst: {
            std::string core = v(a.var) + " >= " + term_to_sparql(a.constant);
            return a.negated ? "!(" + core + ")" : core;
        }
        case AtomKind::IsIri:
            return (a.negated ? "!isIRI(" : "isIRI(") + v(a.var) + ")";
        case AtomKind::IsBlank:
            return (a.negated ? "!isBlank(" : "isBlank(") + v(a.var) + ")";
        case AtomKind::IsLiteral:
            return (a.negated ? "!isLiteral(" : "isLiteral(") + v(a.var) + ")";
        case AtomKind::StrEqConst:
            return "str(" + v(a.var) + ")" + (a.negated ? " != " : " = ") +
                   term_to_sparql(a.constant);
        case AtomKind::LangEqConst:
            return "lang(" + v(a.var) + ")" + (a.negated ? " != " : " = ") +
                   str_const(a.text);
        case AtomKind::LangMatches:
            return std::string(a.negated ? "!" : "") + "langMatches(lang(" + v(a.var) +
                   "), " + str_const(a.text) + ")";
        case AtomKind::RegexStr:
            return std::string(a.negated ? "!" : "") + "regex(str(" + v(a.var) + "), " +
                   str_const(a.text) + ")";
        case AtomKind::RegexVar:
            return std::string(a.negated ? "!" : "") + "regex(" + v(a.var) + ", " +
                   str_const(a.text) + ")";
        case AtomKind::Opaque:
            return a.negated ? "!(" + a.text + ")" : a.text;
    }
    return "";
}

std::string pattern_inner(const Pattern& p);

// Rendering of a pattern as one group element; composite nodes are braced so
// that group assembly cannot reassociate them.
std::string pattern_elem(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Triple:
            return term_to_sparql(p.triple.subject) + " " +
                   term_to_sparql(p.triple.predicate) + " " +
                   term_to_sparql(p.triple.object);
        case PatternKind::GraphIri:
        case PatternKind::GraphVar:
            return "GRAPH " + term_to_sparql(p.graph) + " { " + pattern_inner(*p.left) + " }";
        case PatternKind::Empty:
            return "{}";
        default:
            return "{ " + pattern_inner(p) + " }";
    }
}

std::string pattern_inner(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Empty:
            return "";
        case PatternKind::Triple:
        case PatternKind::GraphIri:
        case PatternKind::GraphVar:
            return pattern_elem(p);
        case PatternKind::And:
            return pattern_elem(*p.left) + " . " + pattern_elem(*p.right);
        case PatternKind::Union:
            return "{ " + pattern_inner(*p.left) + " } UNION { " + pattern_inner(*p.right) + " }";
        case PatternKind::Opt:
            return pattern_elem(*p.left) + " OPTIONAL { " + pattern_inner(*p.right) + " }";
        case PatternKind::Filter: {
            std::string body = pattern_inner(*p.left);
            std::string filter = "FILTER (" + constraint_to_sparql(*p.condition) + ")";
            return body.empty() ? filter : body + " " + filter;
        }
    }
    return "";
}

}  // namespace

std::string term_to_sparql(const Term& t) {
    switch (t.kind) {
        case TermKind::Variable: return "?" + t.lexical;
        case TermKind::Iri: return "<" + t.lexical + ">";
        case TermKind::BlankNode: return "_:" + t.lexical;
        case TermKind::Literal:
            if (t.is_numeric()) return t.lexical;
            if (t.datatype == "http://www.w3.org/2001/XMLSchema#boolean" &&
                (t.lexical == "true" || t.lexical == "false"))
                return t.lexical;
            if (!t.lang.empty()) return escape_string(t.lexical) + "@" + t.lang;
            if (!t.datatype.empty())
                return escape_string(t.lexical) + "^^<" + t.datatype + ">";
            return escape_string(t.lexical);
    }
    return t.lexical;
}

std::string constraint_to_sparql(const Constraint& c) {
    switch (c.kind) {
        case ConstraintKind::Atomic:
            return atom_to_sparql(c.atom);
        case ConstraintKind::And:
            return "(" + constraint_to_sparql(*c.left) + " && " +
                   constraint_to_sparql(*c.right) + ")";
        case ConstraintKind::Or:
            return "(" + constraint_to_sparql(*c.left) + " || " +
                   constraint_to_sparql(*c.right) + ")";
        case ConstraintKind::Not:
            return "!(" + constraint_to_sparql(*c.left) + ")";
    }
    return "";
}

std::string serialize_pattern(const Pattern& p) {
    std::string inner = pattern_inner(p);
    return inner.empty() ? "{}" : "{ " + inner + " }";
}

std::string serialize(const Query& q) {
    std::string out = "SELECT";
    if (q.projection.empty()) {
        out += " *";
    } else {
        for (const auto& v : q.projection) out += " ?" + v;
    }
    out += " WHERE " + serialize_pattern(*q.body);
    return out;
}

}  // namespace sparqlstat
