#include "sparqlstat/term.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <tuple>

namespace sparqlstat {

namespace {
const char* kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
const char* kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
const char* kXsdDouble = "http://www.w3.org/2001/XMLSchema#double";
}  // namespace

Term Term::iri(std::string value) {
    Term t;
    t.kind = TermKind::Iri;
    t.lexical = std::move(value);
    return t;
}

Term Term::literal(std::string value, std::string lang, std::string datatype) {
    Term t;
    t.kind = TermKind::Literal;
    t.lexical = std::move(value);
    t.lang = std::move(lang);
    t.datatype = std::move(datatype);
    return t;
}

Term Term::blank(std::string label) {
    Term t;
    t.kind = TermKind::BlankNode;
    t.lexical = std::move(label);
    return t;
}

Term Term::variable(std::string name) {
    Term t;
    t.kind = TermKind::Variable;
    t.lexical = std::move(name);
    return t;
}

bool Term::is_numeric() const {
    return kind == TermKind::Literal &&
           (datatype == kXsdInteger || datatype == kXsdDecimal ||
            datatype == kXsdDouble);
}

bool Term::operator<(const Term& o) const {
    return std::tie(kind, lexical, lang, datatype) <
           std::tie(o.kind, o.lexical, o.lang, o.datatype);
}

std::string Term::key() const {
    switch (kind) {
        case TermKind::Iri: return "<" + lexical + ">";
        case TermKind::BlankNode: return "_:" + lexical;
        case TermKind::Variable: return "?" + lexical;
        case TermKind::Literal:
            if (!lang.empty()) return "\"" + lexical + "\"@" + lang;
            if (!datatype.empty()) return "\"" + lexical + "\"^^<" + datatype + ">";
            return "\"" + lexical + "\"";
    }
    return lexical;
}

std::optional<std::string> canonical_decimal(const std::string& lexical) {
    const char* s = lexical.c_str();
    bool neg = false;
    std::string digits;  // all digits, no point
    long scale = 0;      // digits after the decimal point
    long exponent = 0;

    if (*s == '+' || *s == '-') {
        neg = (*s == '-');
        ++s;
    }
    bool any = false;
    while (std::isdigit(static_cast<unsigned char>(*s))) {
        digits.push_back(*s++);
        any = true;
    }
    if (*s == '.') {
        ++s;
        while (std::isdigit(static_cast<unsigned char>(*s))) {
            digits.push_back(*s++);
            ++scale;
            any = true;
        }
    }
    if (!any) return std::nullopt;
    if (*s == 'e' || *s == 'E') {
        ++s;
        bool eneg = false;
        if (*s == '+' || *s == '-') {
            eneg = (*s == '-');
            ++s;
        }
        if (!std::isdigit(static_cast<unsigned char>(*s))) return std::nullopt;
        long e = 0;
        while (std::isdigit(static_cast<unsigned char>(*s))) {
            if (e < 1000000) e = e * 10 + (*s - '0');
            ++s;
        }
        exponent = eneg ? -e : e;
    }
    if (*s != '\0') return std::nullopt;

    scale -= exponent;
    // Shift the point right when the exponent outruns the fraction.
    while (scale < 0) {
        digits.push_back('0');
        ++scale;
    }
    // Trim trailing fraction zeros.
    while (scale > 0 && !digits.empty() && digits.back() == '0') {
        digits.pop_back();
        --scale;
    }
    // Integer part without leading zeros.
    std::string intpart =
        digits.substr(0, digits.size() - static_cast<std::size_t>(scale));
    std::string frac = digits.substr(digits.size() - static_cast<std::size_t>(scale));
    std::size_t nz = intpart.find_first_not_of('0');
    intpart = (nz == std::string::npos) ? "" : intpart.substr(nz);
    if (intpart.empty()) intpart = "0";

    std::string out;
    if (frac.empty()) {
        out = intpart;
    } else {
        out = intpart + "." + frac;
    }
    if (neg && out != "0") out.insert(out.begin(), '-');
    return out;
}

int compare_decimal(const std::string& a, const std::string& b) {
    if (a == b) return 0;
    bool aneg = !a.empty() && a[0] == '-';
    bool bneg = !b.empty() && b[0] == '-';
    if (aneg != bneg) return aneg ? -1 : 1;
    auto split = [](const std::string& s, bool neg) {
        std::string t = neg ? s.substr(1) : s;
        auto dot = t.find('.');
        if (dot == std::string::npos) return std::pair<std::string, std::string>(t, "");
        return std::pair<std::string, std::string>(t.substr(0, dot), t.substr(dot + 1));
    };
    auto [ai, af] = split(a, aneg);
    auto [bi, bf] = split(b, bneg);
    int mag;
    if (ai.size() != bi.size()) {
        mag = ai.size() < bi.size() ? -1 : 1;
    } else if (ai != bi) {
        mag = ai < bi ? -1 : 1;
    } else {
        // Align fractions; canonical form has no trailing zeros.
        std::size_t n = std::max(af.size(), bf.size());
        af.resize(n, '0');
        bf.resize(n, '0');
        mag = af == bf ? 0 : (af < bf ? -1 : 1);
    }
    return aneg ? -mag : mag;
}

bool valid_triple_pattern(const TriplePattern& tp) {
    auto spo_ok = [](const Term& t) {
        return t.is_variable() || t.is_iri() || t.is_literal();
    };
    bool pred_ok = tp.predicate.is_variable() || tp.predicate.is_iri();
    return spo_ok(tp.subject) && pred_ok && spo_ok(tp.object);
}

}  // namespace sparqlstat
