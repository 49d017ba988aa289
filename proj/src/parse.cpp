#include "sparqlstat/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace sparqlstat {

const char* to_string(ParseErrorKind k) {
    switch (k) {
        case ParseErrorKind::SyntaxError: return "SyntaxError";
        case ParseErrorKind::Unsupported11: return "Unsupported11";
        case ParseErrorKind::NonSelectForm: return "NonSelectForm";
    }
    return "SyntaxError";
}

namespace {

struct Abort {
    ParseError error;
};

[[noreturn]] void fail(ParseErrorKind kind, std::string msg, std::size_t pos) {
    throw Abort{ParseError{kind, std::move(msg), pos}};
}

// ---------------------------------------------------------------------------
// Tokens

enum class Tok {
    End,
    Iri,      // contents of <...>
    Pname,    // prefixed name, text = as written
    Var,      // text = name without sigil
    String,   // text = unescaped value
    Number,   // text = raw lexical
    Word,     // bare identifier / keyword
    LBrace, RBrace, LParen, RParen,
    Dot, Semicolon, Comma,
    Eq, Neq, Lt, Gt, Leq, Geq,
    AndAnd, OrOr, Bang,
    Star, Plus, Minus, Slash,
    LBracket, RBracket,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t pos = 0;
    // string literal suffixes, attached by the lexer
    std::string lang;
    std::string dt_iri;    // datatype given as <...>
    std::string dt_pname;  // datatype given as a prefixed name
};

bool iri_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u <= 0x20) return false;
    switch (c) {
        case '<': case '>': case '"': case '{': case '}':
        case '|': case '^': case '`': case '\\':
            return false;
        default:
            return true;
    }
}

bool name_start(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalpha(u) || c == '_' || u >= 0x80;
}

bool name_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '-' || u >= 0x80;
}

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return cur_; }
    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

private:
    void skip_space() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') ++i_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++i_;
            } else {
                break;
            }
        }
    }

    void advance() {
        skip_space();
        cur_ = Token{};
        cur_.pos = i_;
        if (i_ >= src_.size()) {
            cur_.kind = Tok::End;
            return;
        }
        char c = src_[i_];
        switch (c) {
            case '{': ++i_; cur_.kind = Tok::LBrace; return;
            case '}': ++i_; cur_.kind = Tok::RBrace; return;
            case '(': ++i_; cur_.kind = Tok::LParen; return;
            case ')': ++i_; cur_.kind = Tok::RParen; return;
            case '[': ++i_; cur_.kind = Tok::LBracket; return;
            case ']': ++i_; cur_.kind = Tok::RBracket; return;
            case ';': ++i_; cur_.kind = Tok::Semicolon; return;
            case ',': ++i_; cur_.kind = Tok::Comma; return;
            case '*': ++i_; cur_.kind = Tok::Star; return;
            case '/': ++i_; cur_.kind = Tok::Slash; return;
            default: break;
        }
        if (c == '.') {
            if (i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
                lex_number();
                return;
            }
            ++i_;
            cur_.kind = Tok::Dot;
            return;
        }
        if (c == '<') {
            // IRI if a '>' is reachable over legal IRI characters.
            std::size_t j = i_ + 1;
            while (j < src_.size() && iri_char(src_[j])) ++j;
            if (j < src_.size() && src_[j] == '>') {
                cur_.kind = Tok::Iri;
                cur_.text = src_.substr(i_ + 1, j - i_ - 1);
                i_ = j + 1;
                return;
            }
            ++i_;
            if (i_ < src_.size() && src_[i_] == '=') {
                ++i_;
                cur_.kind = Tok::Leq;
            } else {
                cur_.kind = Tok::Lt;
            }
            return;
        }
        if (c == '>') {
            ++i_;
            if (i_ < src_.size() && src_[i_] == '=') {
                ++i_;
                cur_.kind = Tok::Geq;
            } else {
                cur_.kind = Tok::Gt;
            }
            return;
        }
        if (c == '=') {
            ++i_;
            cur_.kind = Tok::Eq;
            return;
        }
        if (c == '!') {
            ++i_;
            if (i_ < src_.size() && src_[i_] == '=') {
                ++i_;
                cur_.kind = Tok::Neq;
            } else {
                cur_.kind = Tok::Bang;
            }
            return;
        }
        if (c == '&' && i_ + 1 < src_.size() && src_[i_ + 1] == '&') {
            i_ += 2;
            cur_.kind = Tok::AndAnd;
            return;
        }
        if (c == '|' && i_ + 1 < src_.size() && src_[i_ + 1] == '|') {
            i_ += 2;
            cur_.kind = Tok::OrOr;
            return;
        }
        if (c == '?' || c == '$') {
            ++i_;
            std::size_t start = i_;
            while (i_ < src_.size() && name_char(src_[i_])) ++i_;
            if (i_ == start) fail(ParseErrorKind::SyntaxError, "empty variable name", cur_.pos);
            cur_.kind = Tok::Var;
            cur_.text = src_.substr(start, i_ - start);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(c);
            return;
        }
        if (c == '+' || c == '-') {
            if (i_ + 1 < src_.size() &&
                (std::isdigit(static_cast<unsigned char>(src_[i_ + 1])) || src_[i_ + 1] == '.')) {
                lex_number();
                return;
            }
            ++i_;
            cur_.kind = (c == '+') ? Tok::Plus : Tok::Minus;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lex_number();
            return;
        }
        if (name_start(c) || c == ':') {
            std::size_t start = i_;
            while (i_ < src_.size() && name_char(src_[i_])) ++i_;
            if (i_ < src_.size() && src_[i_] == ':') {
                // prefixed name: prefix ':' local
                ++i_;
                while (i_ < src_.size() &&
                       (name_char(src_[i_]) ||
                        (src_[i_] == '.' && i_ + 1 < src_.size() && name_char(src_[i_ + 1])))) {
                    ++i_;
                }
                cur_.kind = Tok::Pname;
                cur_.text = src_.substr(start, i_ - start);
                return;
            }
            cur_.kind = Tok::Word;
            cur_.text = src_.substr(start, i_ - start);
            return;
        }
        fail(ParseErrorKind::SyntaxError,
             std::string("unexpected character '") + c + "'", cur_.pos);
    }

    void lex_number() {
        std::size_t start = i_;
        if (src_[i_] == '+' || src_[i_] == '-') ++i_;
        while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
        if (i_ < src_.size() && src_[i_] == '.') {
            // do not swallow a trailing statement dot: "1." keeps the dot
            if (i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1]))) {
                ++i_;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            }
        }
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t save = i_;
            ++i_;
            if (i_ < src_.size() && (src_[i_] == '+' || src_[i_] == '-')) ++i_;
            if (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
            } else {
                i_ = save;
            }
        }
        cur_.kind = Tok::Number;
        cur_.text = src_.substr(start, i_ - start);
    }

    void lex_string(char quote) {
        std::size_t pos = i_;
        bool long_form = false;
        if (i_ + 2 < src_.size() && src_[i_ + 1] == quote && src_[i_ + 2] == quote) {
            long_form = true;
            i_ += 3;
        } else {
            ++i_;
        }
        std::string out;
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == '\\') {
                if (i_ + 1 >= src_.size())
                    fail(ParseErrorKind::SyntaxError, "dangling escape", i_);
                char e = src_[i_ + 1];
                i_ += 2;
                switch (e) {
                    case 't': out.push_back('\t'); break;
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '"': out.push_back('"'); break;
                    case '\'': out.push_back('\''); break;
                    case '\\': out.push_back('\\'); break;
                    case 'u': case 'U': {
                        int n = e == 'u' ? 4 : 8;
                        unsigned long cp = 0;
                        for (int k = 0; k < n; ++k) {
                            if (i_ >= src_.size() || !std::isxdigit(static_cast<unsigned char>(src_[i_])))
                                fail(ParseErrorKind::SyntaxError, "bad unicode escape", i_);
                            char h = src_[i_++];
                            cp = cp * 16 + static_cast<unsigned long>(
                                               std::isdigit(static_cast<unsigned char>(h))
                                                   ? h - '0'
                                                   : std::tolower(h) - 'a' + 10);
                        }
                        // encode as UTF-8
                        if (cp < 0x80) {
                            out.push_back(static_cast<char>(cp));
                        } else if (cp < 0x800) {
                            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                        } else if (cp < 0x10000) {
                            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                        } else {
                            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
                        }
                        break;
                    }
                    default:
                        fail(ParseErrorKind::SyntaxError, "unknown escape", i_ - 1);
                }
                continue;
            }
            if (long_form) {
                if (c == quote && i_ + 2 < src_.size() && src_[i_ + 1] == quote &&
                    src_[i_ + 2] == quote) {
                    i_ += 3;
                    cur_.kind = Tok::String;
                    cur_.text = std::move(out);
                    lex_literal_suffix();
                    return;
                }
                out.push_back(c);
                ++i_;
                continue;
            }
            if (c == quote) {
                ++i_;
                cur_.kind = Tok::String;
                cur_.text = std::move(out);
                lex_literal_suffix();
                return;
            }
            if (c == '\n') fail(ParseErrorKind::SyntaxError, "newline in string", i_);
            out.push_back(c);
            ++i_;
        }
        fail(ParseErrorKind::SyntaxError, "unterminated string", pos);
    }

    // '@lang' or '^^<dt>' / '^^pn:local' directly after the closing quote
    void lex_literal_suffix() {
        if (i_ < src_.size() && src_[i_] == '@') {
            ++i_;
            std::size_t start = i_;
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '-'))
                ++i_;
            if (i_ == start) fail(ParseErrorKind::SyntaxError, "empty language tag", start);
            cur_.lang = src_.substr(start, i_ - start);
            return;
        }
        if (i_ + 1 < src_.size() && src_[i_] == '^' && src_[i_ + 1] == '^') {
            i_ += 2;
            if (i_ < src_.size() && src_[i_] == '<') {
                std::size_t j = i_ + 1;
                while (j < src_.size() && iri_char(src_[j])) ++j;
                if (j >= src_.size() || src_[j] != '>')
                    fail(ParseErrorKind::SyntaxError, "malformed datatype IRI", i_);
                cur_.dt_iri = src_.substr(i_ + 1, j - i_ - 1);
                i_ = j + 1;
                return;
            }
            std::size_t start = i_;
            while (i_ < src_.size() && name_char(src_[i_])) ++i_;
            if (i_ >= src_.size() || src_[i_] != ':')
                fail(ParseErrorKind::SyntaxError, "malformed datatype", start);
            ++i_;
            while (i_ < src_.size() && name_char(src_[i_])) ++i_;
            cur_.dt_pname = src_.substr(start, i_ - start);
            return;
        }
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token cur_;
};

bool word_is(const Token& t, const char* kw) {
    if (t.kind != Tok::Word) return false;
    const std::string& s = t.text;
    std::size_t n = 0;
    for (; kw[n]; ++n) {
        if (n >= s.size()) return false;
        if (std::toupper(static_cast<unsigned char>(s[n])) != kw[n]) return false;
    }
    return n == s.size();
}

// ---------------------------------------------------------------------------
// Expression AST for FILTER conditions. Recognized shapes become atomic
// constraints; everything else is kept as an opaque atom.

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class ExprKind { Or, And, Not, Cmp, Arith, Call, VarRef, Const };

struct Expr {
    ExprKind kind;
    std::string op;               // Cmp: = != < > <= >= ; Arith: + - * /
    std::string name;             // Call
    std::vector<ExprPtr> args;    // Call args / operands
    std::string var;              // VarRef
    Term term;                    // Const
};

ExprPtr make_expr(ExprKind k) {
    auto e = std::make_unique<Expr>();
    e->kind = k;
    return e;
}

const char* kUnsupported11Words[] = {
    "SERVICE", "BIND", "VALUES", "MINUS", "EXISTS", "GROUP", "HAVING",
    "COUNT", "SUM", "AVG", "SAMPLE", "GROUP_CONCAT", "INSERT", "DELETE",
    "LOAD", "CLEAR", "CREATE", "DROP", "WITH", "USING", "UNDEF",
};

bool is_unsupported11_word(const Token& t) {
    for (const char* w : kUnsupported11Words)
        if (word_is(t, w)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Query parse() {
        parse_prologue();
        const Token& t = lex_.peek();
        if (word_is(t, "ASK") || word_is(t, "CONSTRUCT") || word_is(t, "DESCRIBE"))
            fail(ParseErrorKind::NonSelectForm, "non-SELECT query form: " + t.text, t.pos);
        if (is_unsupported11_word(t))
            fail(ParseErrorKind::Unsupported11, "unsupported construct: " + t.text, t.pos);
        if (!word_is(t, "SELECT"))
            fail(ParseErrorKind::SyntaxError, "expected SELECT", t.pos);
        lex_.next();

        bool star = false;
        std::vector<std::string> proj;
        if (word_is(lex_.peek(), "DISTINCT") || word_is(lex_.peek(), "REDUCED")) lex_.next();
        while (true) {
            const Token& p = lex_.peek();
            if (p.kind == Tok::Star) {
                lex_.next();
                star = true;
                break;
            }
            if (p.kind == Tok::Var) {
                proj.push_back(lex_.next().text);
                continue;
            }
            if (p.kind == Tok::LParen)
                fail(ParseErrorKind::Unsupported11, "SELECT expressions are SPARQL 1.1", p.pos);
            break;
        }
        if (!star && proj.empty())
            fail(ParseErrorKind::SyntaxError, "empty projection", lex_.peek().pos);

        // dataset clauses, accepted and ignored
        while (word_is(lex_.peek(), "FROM")) {
            lex_.next();
            if (word_is(lex_.peek(), "NAMED")) lex_.next();
            Term iri = parse_iri_term();
            (void)iri;
        }

        if (word_is(lex_.peek(), "WHERE")) lex_.next();
        expect(Tok::LBrace, "expected '{'");
        PatternPtr body = parse_group();
        parse_solution_modifiers();
        const Token& end = lex_.peek();
        if (end.kind != Tok::End)
            fail(ParseErrorKind::SyntaxError, "trailing content after query", end.pos);

        Query q;
        if (star) {
            auto vars = pattern_vars(*body);
            q.projection.assign(vars.begin(), vars.end());
        } else {
            std::sort(proj.begin(), proj.end());
            proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
            q.projection = std::move(proj);
        }
        q.body = std::move(body);
        return q;
    }

private:
    void expect(Tok k, const char* what) {
        const Token& t = lex_.peek();
        if (t.kind != k) fail(ParseErrorKind::SyntaxError, what, t.pos);
        lex_.next();
    }

    void parse_prologue() {
        while (true) {
            const Token& t = lex_.peek();
            if (word_is(t, "BASE")) {
                lex_.next();
                const Token& iri = lex_.peek();
                if (iri.kind != Tok::Iri) fail(ParseErrorKind::SyntaxError, "expected IRI after BASE", iri.pos);
                base_ = lex_.next().text;
            } else if (word_is(t, "PREFIX")) {
                lex_.next();
                const Token& name = lex_.peek();
                if (name.kind != Tok::Pname)
                    fail(ParseErrorKind::SyntaxError, "expected prefix name", name.pos);
                std::string pfx = lex_.next().text;
                if (pfx.empty() || pfx.back() != ':')
                    fail(ParseErrorKind::SyntaxError, "malformed prefix declaration", name.pos);
                pfx.pop_back();
                const Token& iri = lex_.peek();
                if (iri.kind != Tok::Iri)
                    fail(ParseErrorKind::SyntaxError, "expected IRI after prefix", iri.pos);
                prefixes_[pfx] = resolve_iri(lex_.next().text);
            } else {
                return;
            }
        }
    }

    std::string resolve_iri(const std::string& iri) const {
        if (!base_.empty() && iri.find(':') == std::string::npos) return base_ + iri;
        return iri;
    }

    std::string expand_pname(const Token& t) const {
        auto colon = t.text.find(':');
        std::string pfx = t.text.substr(0, colon);
        std::string local = t.text.substr(colon + 1);
        auto it = prefixes_.find(pfx);
        if (it == prefixes_.end())
            fail(ParseErrorKind::SyntaxError, "undeclared prefix '" + pfx + ":'", t.pos);
        return it->second + local;
    }

    Term parse_iri_term() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Iri) return Term::iri(resolve_iri(lex_.next().text));
        if (t.kind == Tok::Pname) {
            Token tok = lex_.next();
            return Term::iri(expand_pname(tok));
        }
        fail(ParseErrorKind::SyntaxError, "expected IRI", t.pos);
    }

    Term normalize_numeric(const std::string& lexical, std::size_t pos) {
        auto canon = canonical_decimal(lexical);
        if (!canon) fail(ParseErrorKind::SyntaxError, "malformed numeric literal", pos);
        bool integral = canon->find('.') == std::string::npos;
        return Term::literal(*canon, "",
                             integral ? "http://www.w3.org/2001/XMLSchema#integer"
                                      : "http://www.w3.org/2001/XMLSchema#decimal");
    }

    Term make_literal(Token tok) {
        std::string datatype;
        if (!tok.dt_iri.empty()) {
            datatype = resolve_iri(tok.dt_iri);
        } else if (!tok.dt_pname.empty()) {
            Token dt;
            dt.kind = Tok::Pname;
            dt.text = tok.dt_pname;
            dt.pos = tok.pos;
            datatype = expand_pname(dt);
        }
        if (datatype == "http://www.w3.org/2001/XMLSchema#integer" ||
            datatype == "http://www.w3.org/2001/XMLSchema#decimal" ||
            datatype == "http://www.w3.org/2001/XMLSchema#double" ||
            datatype == "http://www.w3.org/2001/XMLSchema#float") {
            auto canon = canonical_decimal(tok.text);
            if (canon) return normalize_numeric(tok.text, tok.pos);
            // fall through: keep the malformed lexical as an ordinary literal
        }
        return Term::literal(std::move(tok.text), std::move(tok.lang), std::move(datatype));
    }

    Term parse_term(bool allow_literal) {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Var: return Term::variable(lex_.next().text);
            case Tok::Iri: return Term::iri(resolve_iri(lex_.next().text));
            case Tok::Pname: {
                Token tok = lex_.next();
                return Term::iri(expand_pname(tok));
            }
            case Tok::Number: {
                if (!allow_literal) break;
                Token tok = lex_.next();
                return normalize_numeric(tok.text, tok.pos);
            }
            case Tok::String: {
                if (!allow_literal) break;
                Token tok = lex_.next();
                return make_literal(std::move(tok));
            }
            case Tok::Word: {
                if (word_is(t, "A")) break;  // callers handle 'a'
                if (allow_literal && (word_is(t, "TRUE") || word_is(t, "FALSE"))) {
                    Token tok = lex_.next();
                    bool v = word_is(tok, "TRUE");
                    return Term::literal(v ? "true" : "false", "",
                                         "http://www.w3.org/2001/XMLSchema#boolean");
                }
                break;
            }
            case Tok::LBracket:
                fail(ParseErrorKind::SyntaxError, "blank nodes are not allowed in patterns", t.pos);
            default:
                break;
        }
        fail(ParseErrorKind::SyntaxError, "expected term", t.pos);
    }

    // --- group graph patterns ---

    PatternPtr parse_group() {
        PatternPtr current;
        std::vector<ConstraintPtr> filters;
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Tok::RBrace) {
                lex_.next();
                break;
            }
            if (t.kind == Tok::End)
                fail(ParseErrorKind::SyntaxError, "unterminated group", t.pos);
            if (t.kind == Tok::Dot) {
                lex_.next();
                continue;
            }
            if (t.kind == Tok::LBrace) {
                lex_.next();
                PatternPtr sub = parse_group_or_union();
                join(current, std::move(sub));
                continue;
            }
            if (word_is(t, "OPTIONAL")) {
                lex_.next();
                expect(Tok::LBrace, "expected '{' after OPTIONAL");
                PatternPtr right = parse_group();
                PatternPtr left = current ? std::move(current) : Pattern::empty();
                current = Pattern::opt(std::move(left), std::move(right));
                continue;
            }
            if (word_is(t, "FILTER")) {
                lex_.next();
                filters.push_back(parse_filter_constraint());
                continue;
            }
            if (word_is(t, "GRAPH")) {
                lex_.next();
                const Token& nt = lex_.peek();
                Term gt;
                if (nt.kind == Tok::Var) {
                    gt = Term::variable(lex_.next().text);
                } else if (nt.kind == Tok::Iri || nt.kind == Tok::Pname) {
                    gt = parse_iri_term();
                } else {
                    fail(ParseErrorKind::SyntaxError, "expected graph name", nt.pos);
                }
                expect(Tok::LBrace, "expected '{' after GRAPH");
                PatternPtr child = parse_group();
                PatternPtr node = gt.is_variable()
                                      ? Pattern::graph_var(std::move(gt), std::move(child))
                                      : Pattern::graph_iri(std::move(gt), std::move(child));
                join(current, std::move(node));
                continue;
            }
            if (word_is(t, "SELECT"))
                fail(ParseErrorKind::Unsupported11, "subqueries are SPARQL 1.1", t.pos);
            if (is_unsupported11_word(t))
                fail(ParseErrorKind::Unsupported11, "unsupported construct: " + t.text, t.pos);
            // otherwise: triples
            parse_triples_same_subject(current);
        }
        PatternPtr out = current ? std::move(current) : Pattern::empty();
        for (auto& f : filters) out = Pattern::filter(std::move(out), std::move(f));
        return out;
    }

    PatternPtr parse_group_or_union() {
        PatternPtr left = parse_group();
        while (word_is(lex_.peek(), "UNION")) {
            lex_.next();
            expect(Tok::LBrace, "expected '{' after UNION");
            PatternPtr right = parse_group();
            left = Pattern::disj(std::move(left), std::move(right));
        }
        return left;
    }

    static void join(PatternPtr& current, PatternPtr next) {
        if (!current) {
            current = std::move(next);
        } else {
            current = Pattern::conj(std::move(current), std::move(next));
        }
    }

    void parse_triples_same_subject(PatternPtr& current) {
        const Token& st = lex_.peek();
        if (st.kind == Tok::LParen)
            fail(ParseErrorKind::SyntaxError, "collections are not supported", st.pos);
        Term subject = parse_term(true);
        check_property_path(subject);
        while (true) {
            Term predicate;
            const Token& pt = lex_.peek();
            if (pt.kind == Tok::Word && word_is(pt, "A")) {
                lex_.next();
                predicate = Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
            } else if (pt.kind == Tok::Var) {
                predicate = Term::variable(lex_.next().text);
            } else if (pt.kind == Tok::Iri || pt.kind == Tok::Pname) {
                predicate = parse_iri_term();
                check_property_path(predicate);
            } else {
                fail(ParseErrorKind::SyntaxError, "expected predicate", pt.pos);
            }
            while (true) {
                Term object = parse_term(true);
                TriplePattern tp{subject, predicate, object};
                if (!valid_triple_pattern(tp))
                    fail(ParseErrorKind::SyntaxError, "invalid triple pattern positions",
                         lex_.peek().pos);
                join(current, Pattern::triple_pattern(std::move(tp)));
                if (lex_.peek().kind == Tok::Comma) {
                    lex_.next();
                    continue;
                }
                break;
            }
            if (lex_.peek().kind == Tok::Semicolon) {
                lex_.next();
                // allow trailing ';' before '.', '}', or a keyword
                const Token& nt = lex_.peek();
                if (nt.kind == Tok::Dot || nt.kind == Tok::RBrace) break;
                if (nt.kind == Tok::Word &&
                    (word_is(nt, "OPTIONAL") || word_is(nt, "FILTER") || word_is(nt, "GRAPH")))
                    break;
                continue;
            }
            break;
        }
    }

    void check_property_path(const Term& t) {
        if (!t.is_iri()) return;
        const Token& nt = lex_.peek();
        if (nt.kind == Tok::Slash || nt.kind == Tok::Plus)
            fail(ParseErrorKind::Unsupported11, "property paths are SPARQL 1.1", nt.pos);
    }

    // --- FILTER constraints ---

    ConstraintPtr parse_filter_constraint() {
        const Token& t = lex_.peek();
        ExprPtr e;
        if (t.kind == Tok::LParen) {
            e = parse_expression_parens();
        } else if (t.kind == Tok::Word || t.kind == Tok::Iri || t.kind == Tok::Pname) {
            e = parse_call_or_function();
        } else {
            fail(ParseErrorKind::SyntaxError, "expected filter condition", t.pos);
        }
        // Relational / boolean operators may follow a bare built-in call:
        // FILTER bound(?x) && ?y = 1 is not legal SPARQL, but FILTER
        // (bound(?x) && ...) is; keep strict here.
        return expr_to_constraint(*e);
    }

    ExprPtr parse_expression_parens() {
        expect(Tok::LParen, "expected '('");
        ExprPtr e = parse_or_expr();
        expect(Tok::RParen, "expected ')'");
        return e;
    }

    ExprPtr parse_or_expr() {
        ExprPtr left = parse_and_expr();
        while (lex_.peek().kind == Tok::OrOr) {
            lex_.next();
            ExprPtr right = parse_and_expr();
            auto e = make_expr(ExprKind::Or);
            e->args.push_back(std::move(left));
            e->args.push_back(std::move(right));
            left = std::move(e);
        }
        return left;
    }

    ExprPtr parse_and_expr() {
        ExprPtr left = parse_relational_expr();
        while (lex_.peek().kind == Tok::AndAnd) {
            lex_.next();
            ExprPtr right = parse_relational_expr();
            auto e = make_expr(ExprKind::And);
            e->args.push_back(std::move(left));
            e->args.push_back(std::move(right));
            left = std::move(e);
        }
        return left;
    }

    ExprPtr parse_relational_expr() {
        ExprPtr left = parse_additive_expr();
        const Token& t = lex_.peek();
        const char* op = nullptr;
        switch (t.kind) {
            case Tok::Eq: op = "="; break;
            case Tok::Neq: op = "!="; break;
            case Tok::Lt: op = "<"; break;
            case Tok::Gt: op = ">"; break;
            case Tok::Leq: op = "<="; break;
            case Tok::Geq: op = ">="; break;
            default: break;
        }
        if (!op) return left;
        lex_.next();
        ExprPtr right = parse_additive_expr();
        auto e = make_expr(ExprKind::Cmp);
        e->op = op;
        e->args.push_back(std::move(left));
        e->args.push_back(std::move(right));
        return e;
    }

    ExprPtr parse_additive_expr() {
        ExprPtr left = parse_multiplicative_expr();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Plus && t.kind != Tok::Minus) break;
            std::string op = t.kind == Tok::Plus ? "+" : "-";
            lex_.next();
            ExprPtr right = parse_multiplicative_expr();
            auto e = make_expr(ExprKind::Arith);
            e->op = op;
            e->args.push_back(std::move(left));
            e->args.push_back(std::move(right));
            left = std::move(e);
        }
        return left;
    }

    ExprPtr parse_multiplicative_expr() {
        ExprPtr left = parse_unary_expr();
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind != Tok::Star && t.kind != Tok::Slash) break;
            std::string op = t.kind == Tok::Star ? "*" : "/";
            lex_.next();
            ExprPtr right = parse_unary_expr();
            auto e = make_expr(ExprKind::Arith);
            e->op = op;
            e->args.push_back(std::move(left));
            e->args.push_back(std::move(right));
            left = std::move(e);
        }
        return left;
    }

    ExprPtr parse_unary_expr() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Bang) {
            lex_.next();
            ExprPtr inner = parse_unary_expr();
            auto e = make_expr(ExprKind::Not);
            e->args.push_back(std::move(inner));
            return e;
        }
        return parse_primary_expr();
    }

    ExprPtr parse_primary_expr() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::LParen:
                return parse_expression_parens();
            case Tok::Var: {
                auto e = make_expr(ExprKind::VarRef);
                e->var = lex_.next().text;
                return e;
            }
            case Tok::Iri: case Tok::Pname: case Tok::Number: case Tok::String: {
                auto e = make_expr(ExprKind::Const);
                e->term = parse_const_term();
                return e;
            }
            case Tok::Word: {
                if (word_is(t, "TRUE") || word_is(t, "FALSE")) {
                    auto e = make_expr(ExprKind::Const);
                    e->term = parse_term(true);
                    return e;
                }
                if (word_is(t, "EXISTS") || word_is(t, "NOT"))
                    fail(ParseErrorKind::Unsupported11, "EXISTS is SPARQL 1.1", t.pos);
                return parse_call_or_function();
            }
            default:
                fail(ParseErrorKind::SyntaxError, "expected expression", t.pos);
        }
    }

    Term parse_const_term() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Iri || t.kind == Tok::Pname) return parse_iri_term();
        if (t.kind == Tok::Number) {
            Token tok = lex_.next();
            return normalize_numeric(tok.text, tok.pos);
        }
        if (t.kind == Tok::String) {
            Token tok = lex_.next();
            return make_literal(std::move(tok));
        }
        fail(ParseErrorKind::SyntaxError, "expected constant", t.pos);
    }

    ExprPtr parse_call_or_function() {
        const Token& t = lex_.peek();
        std::string name;
        if (t.kind == Tok::Word) {
            name = lex_.next().text;
        } else if (t.kind == Tok::Iri || t.kind == Tok::Pname) {
            Term iri = parse_iri_term();
            name = "<" + iri.lexical + ">";
        } else {
            fail(ParseErrorKind::SyntaxError, "expected function", t.pos);
        }
        auto e = make_expr(ExprKind::Call);
        e->name = std::move(name);
        expect(Tok::LParen, "expected '(' after function name");
        if (lex_.peek().kind != Tok::RParen) {
            while (true) {
                e->args.push_back(parse_or_expr());
                if (lex_.peek().kind == Tok::Comma) {
                    lex_.next();
                    continue;
                }
                break;
            }
        }
        expect(Tok::RParen, "expected ')'");
        return e;
    }

    // --- expression -> constraint mapping ---

    ConstraintPtr expr_to_constraint(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Or:
                return Constraint::disj(expr_to_constraint(*e.args[0]),
                                        expr_to_constraint(*e.args[1]));
            case ExprKind::And:
                return Constraint::conj(expr_to_constraint(*e.args[0]),
                                        expr_to_constraint(*e.args[1]));
            case ExprKind::Not: {
                ConstraintPtr inner = expr_to_constraint(*e.args[0]);
                if (inner->kind == ConstraintKind::Atomic) {
                    inner->atom.negated = !inner->atom.negated;
                    return inner;
                }
                return Constraint::negate(std::move(inner));
            }
            default:
                return atom_constraint(e);
        }
    }

    ConstraintPtr atom_constraint(const Expr& e) {
        if (auto a = recognize_atom(e)) return Constraint::atomic(std::move(*a));
        AtomicConstraint a;
        a.kind = AtomKind::Opaque;
        a.text = print_expr(e);
        std::set<std::string> vars;
        collect_expr_vars(e, vars);
        a.opaque_vars.assign(vars.begin(), vars.end());
        return Constraint::atomic(std::move(a));
    }

    static bool call_named(const Expr& e, const char* name) {
        if (e.kind != ExprKind::Call) return false;
        const std::string& s = e.name;
        std::size_t n = 0;
        for (; name[n]; ++n) {
            if (n >= s.size()) return false;
            if (std::toupper(static_cast<unsigned char>(s[n])) !=
                std::toupper(static_cast<unsigned char>(name[n])))
                return false;
        }
        return n == s.size();
    }

    std::optional<AtomicConstraint> recognize_atom(const Expr& e) {
        AtomicConstraint a;
        if (e.kind == ExprKind::Call) {
            if (call_named(e, "bound") && e.args.size() == 1 &&
                e.args[0]->kind == ExprKind::VarRef) {
                a.kind = AtomKind::Bound;
                a.var = e.args[0]->var;
                return a;
            }
            if ((call_named(e, "isIRI") || call_named(e, "isURI")) && e.args.size() == 1 &&
                e.args[0]->kind == ExprKind::VarRef) {
                a.kind = AtomKind::IsIri;
                a.var = e.args[0]->var;
                return a;
            }
            if (call_named(e, "isBlank") && e.args.size() == 1 &&
                e.args[0]->kind == ExprKind::VarRef) {
                a.kind = AtomKind::IsBlank;
                a.var = e.args[0]->var;
                return a;
            }
            if (call_named(e, "isLiteral") && e.args.size() == 1 &&
                e.args[0]->kind == ExprKind::VarRef) {
                a.kind = AtomKind::IsLiteral;
                a.var = e.args[0]->var;
                return a;
            }
            if (call_named(e, "langMatches") && e.args.size() == 2 &&
                call_named(*e.args[0], "lang") && e.args[0]->args.size() == 1 &&
                e.args[0]->args[0]->kind == ExprKind::VarRef &&
                e.args[1]->kind == ExprKind::Const && e.args[1]->term.is_literal()) {
                a.kind = AtomKind::LangMatches;
                a.var = e.args[0]->args[0]->var;
                a.text = e.args[1]->term.lexical;
                return a;
            }
            if (call_named(e, "regex") && e.args.size() == 2 &&
                e.args[1]->kind == ExprKind::Const && e.args[1]->term.is_literal()) {
                const Expr& arg0 = *e.args[0];
                if (call_named(arg0, "str") && arg0.args.size() == 1 &&
                    arg0.args[0]->kind == ExprKind::VarRef) {
                    a.kind = AtomKind::RegexStr;
                    a.var = arg0.args[0]->var;
                    a.text = e.args[1]->term.lexical;
                    return a;
                }
                if (arg0.kind == ExprKind::VarRef) {
                    a.kind = AtomKind::RegexVar;
                    a.var = arg0.var;
                    a.text = e.args[1]->term.lexical;
                    return a;
                }
            }
            return std::nullopt;
        }
        if (e.kind != ExprKind::Cmp) return std::nullopt;

        const Expr* lhs = e.args[0].get();
        const Expr* rhs = e.args[1].get();
        std::string op = e.op;
        // normalize constant-on-the-left comparisons
        if (lhs->kind == ExprKind::Const &&
            (rhs->kind == ExprKind::VarRef || rhs->kind == ExprKind::Call)) {
            std::swap(lhs, rhs);
            if (op == "<") op = ">";
            else if (op == ">") op = "<";
            else if (op == "<=") op = ">=";
            else if (op == ">=") op = "<=";
        }

        if (lhs->kind == ExprKind::VarRef && rhs->kind == ExprKind::VarRef) {
            if (op == "=" || op == "!=") {
                a.kind = AtomKind::EqVar;
                a.negated = op == "!=";
                a.var = lhs->var;
                a.var2 = rhs->var;
                return a;
            }
            return std::nullopt;
        }
        if (lhs->kind == ExprKind::VarRef && rhs->kind == ExprKind::Const) {
            a.var = lhs->var;
            a.constant = rhs->term;
            if (op == "=" || op == "!=") {
                a.kind = AtomKind::EqConst;
                a.negated = op == "!=";
                return a;
            }
            if (op == "<") { a.kind = AtomKind::LtConst; return a; }
            if (op == "<=") { a.kind = AtomKind::LeqConst; return a; }
            if (op == ">") { a.kind = AtomKind::GtConst; return a; }
            if (op == ">=") { a.kind = AtomKind::GeqConst; return a; }
            return std::nullopt;
        }
        if (lhs->kind == ExprKind::Call && rhs->kind == ExprKind::Const &&
            (op == "=" || op == "!=")) {
            if (call_named(*lhs, "str") && lhs->args.size() == 1 &&
                lhs->args[0]->kind == ExprKind::VarRef && rhs->term.is_literal()) {
                a.kind = AtomKind::StrEqConst;
                a.negated = op == "!=";
                a.var = lhs->args[0]->var;
                a.constant = rhs->term;
                return a;
            }
            if (call_named(*lhs, "lang") && lhs->args.size() == 1 &&
                lhs->args[0]->kind == ExprKind::VarRef && rhs->term.is_literal()) {
                a.kind = AtomKind::LangEqConst;
                a.negated = op == "!=";
                a.var = lhs->args[0]->var;
                a.text = rhs->term.lexical;
                return a;
            }
        }
        return std::nullopt;
    }

    static void collect_expr_vars(const Expr& e, std::set<std::string>& out) {
        if (e.kind == ExprKind::VarRef) out.insert(e.var);
        for (const auto& arg : e.args) collect_expr_vars(*arg, out);
    }

    static std::string escape_string(const std::string& s) {
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

    static std::string print_term(const Term& t) {
        switch (t.kind) {
            case TermKind::Variable: return "?" + t.lexical;
            case TermKind::Iri: return "<" + t.lexical + ">";
            case TermKind::BlankNode: return "_:" + t.lexical;
            case TermKind::Literal:
                if (t.is_numeric()) return t.lexical;
                if (t.datatype == "http://www.w3.org/2001/XMLSchema#boolean") return t.lexical;
                if (!t.lang.empty()) return escape_string(t.lexical) + "@" + t.lang;
                if (!t.datatype.empty())
                    return escape_string(t.lexical) + "^^<" + t.datatype + ">";
                return escape_string(t.lexical);
        }
        return t.lexical;
    }

    static std::string print_expr(const Expr& e) {
        switch (e.kind) {
            case ExprKind::Or:
                return "(" + print_expr(*e.args[0]) + " || " + print_expr(*e.args[1]) + ")";
            case ExprKind::And:
                return "(" + print_expr(*e.args[0]) + " && " + print_expr(*e.args[1]) + ")";
            case ExprKind::Not:
                return "!" + print_expr(*e.args[0]);
            case ExprKind::Cmp:
            case ExprKind::Arith:
                return "(" + print_expr(*e.args[0]) + " " + e.op + " " +
                       print_expr(*e.args[1]) + ")";
            case ExprKind::Call: {
                std::string out = e.name + "(";
                for (std::size_t i = 0; i < e.args.size(); ++i) {
                    if (i) out += ", ";
                    out += print_expr(*e.args[i]);
                }
                return out + ")";
            }
            case ExprKind::VarRef:
                return "?" + e.var;
            case ExprKind::Const:
                return print_term(e.term);
        }
        return "";
    }

    void parse_solution_modifiers() {
        while (true) {
            const Token& t = lex_.peek();
            if (word_is(t, "ORDER")) {
                lex_.next();
                if (!word_is(lex_.peek(), "BY"))
                    fail(ParseErrorKind::SyntaxError, "expected BY after ORDER", lex_.peek().pos);
                lex_.next();
                int conditions = 0;
                while (true) {
                    const Token& c = lex_.peek();
                    if (word_is(c, "ASC") || word_is(c, "DESC")) {
                        lex_.next();
                        (void)parse_expression_parens();
                        ++conditions;
                        continue;
                    }
                    if (c.kind == Tok::Var) {
                        lex_.next();
                        ++conditions;
                        continue;
                    }
                    if (c.kind == Tok::LParen) {
                        (void)parse_expression_parens();
                        ++conditions;
                        continue;
                    }
                    if (c.kind == Tok::Word && !word_is(c, "LIMIT") && !word_is(c, "OFFSET")) {
                        (void)parse_call_or_function();
                        ++conditions;
                        continue;
                    }
                    break;
                }
                if (conditions == 0)
                    fail(ParseErrorKind::SyntaxError, "empty ORDER BY", t.pos);
                continue;
            }
            if (word_is(t, "LIMIT") || word_is(t, "OFFSET")) {
                lex_.next();
                const Token& n = lex_.peek();
                if (n.kind != Tok::Number)
                    fail(ParseErrorKind::SyntaxError, "expected integer", n.pos);
                lex_.next();
                continue;
            }
            break;
        }
    }

    Lexer lex_;
    std::string base_;
    std::map<std::string, std::string> prefixes_;
};

}  // namespace

ParseResult parse_query(const std::string& text) {
    try {
        Parser p(text);
        return p.parse();
    } catch (const Abort& a) {
        return a.error;
    }
}

}  // namespace sparqlstat
