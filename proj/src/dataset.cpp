#include "sparqlstat/dataset.hpp"

#include <fstream>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "sparqlstat/serialize.hpp"

namespace sparqlstat {

bool valid_rdf_triple(const RdfTriple& t) {
    const Term& s = t[0];
    const Term& p = t[1];
    const Term& o = t[2];
    bool s_ok = s.is_iri() || s.is_blank();
    bool p_ok = p.is_iri();
    bool o_ok = o.is_iri() || o.is_blank() || o.is_literal();
    return s_ok && p_ok && o_ok;
}

void RdfDataset::add(Term s, Term p, Term o) {
    default_graph.push_back({std::move(s), std::move(p), std::move(o)});
}

void RdfDataset::add_named(const std::string& graph, Term s, Term p, Term o) {
    named[graph].push_back({std::move(s), std::move(p), std::move(o)});
}

std::size_t RdfDataset::size() const {
    std::size_t n = default_graph.size();
    for (const auto& [name, g] : named) n += g.size();
    return n;
}

std::string dataset_to_text(const RdfDataset& d) {
    std::string out;
    for (const auto& t : d.default_graph) {
        out += term_to_sparql(t[0]) + " " + term_to_sparql(t[1]) + " " +
               term_to_sparql(t[2]) + " .\n";
    }
    for (const auto& [name, g] : d.named) {
        for (const auto& t : g) {
            out += term_to_sparql(t[0]) + " " + term_to_sparql(t[1]) + " " +
                   term_to_sparql(t[2]) + " <" + name + "> .\n";
        }
    }
    return out;
}

namespace {

struct LineLexer {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    }

    bool done() {
        skip_ws();
        return i >= s.size() || s[i] == '#';
    }

    Term next_term() {
        skip_ws();
        if (i >= s.size()) throw std::runtime_error("unexpected end of triple line");
        char c = s[i];
        if (c == '<') {
            auto end = s.find('>', i);
            if (end == std::string::npos) throw std::runtime_error("unterminated IRI");
            Term t = Term::iri(s.substr(i + 1, end - i - 1));
            i = end + 1;
            return t;
        }
        if (c == '_' && i + 1 < s.size() && s[i + 1] == ':') {
            i += 2;
            std::size_t start = i;
            while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
            return Term::blank(s.substr(start, i - start));
        }
        if (c == '"') {
            ++i;
            std::string value;
            while (i < s.size() && s[i] != '"') {
                if (s[i] == '\\' && i + 1 < s.size()) {
                    char e = s[i + 1];
                    i += 2;
                    switch (e) {
                        case 'n': value.push_back('\n'); break;
                        case 't': value.push_back('\t'); break;
                        case 'r': value.push_back('\r'); break;
                        case '"': value.push_back('"'); break;
                        case '\\': value.push_back('\\'); break;
                        default: value.push_back(e);
                    }
                    continue;
                }
                value.push_back(s[i++]);
            }
            if (i >= s.size()) throw std::runtime_error("unterminated literal");
            ++i;  // closing quote
            std::string lang, datatype;
            if (i < s.size() && s[i] == '@') {
                ++i;
                std::size_t start = i;
                while (i < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-'))
                    ++i;
                lang = s.substr(start, i - start);
            } else if (i + 1 < s.size() && s[i] == '^' && s[i + 1] == '^') {
                i += 2;
                if (i >= s.size() || s[i] != '<') throw std::runtime_error("malformed datatype");
                auto end = s.find('>', i);
                if (end == std::string::npos) throw std::runtime_error("unterminated datatype");
                datatype = s.substr(i + 1, end - i - 1);
                i = end + 1;
            }
            if (datatype == "http://www.w3.org/2001/XMLSchema#integer" ||
                datatype == "http://www.w3.org/2001/XMLSchema#decimal" ||
                datatype == "http://www.w3.org/2001/XMLSchema#double" ||
                datatype == "http://www.w3.org/2001/XMLSchema#float") {
                if (auto canon = canonical_decimal(value)) {
                    bool integral = canon->find('.') == std::string::npos;
                    return Term::literal(*canon, "",
                                         integral
                                             ? "http://www.w3.org/2001/XMLSchema#integer"
                                             : "http://www.w3.org/2001/XMLSchema#decimal");
                }
            }
            return Term::literal(std::move(value), std::move(lang), std::move(datatype));
        }
        // bare numerics, for convenience
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::string word = s.substr(start, i - start);
        if (word == ".") throw std::runtime_error("missing term before '.'");
        if (auto canon = canonical_decimal(word)) {
            bool integral = canon->find('.') == std::string::npos;
            return Term::literal(*canon, "",
                                 integral ? "http://www.w3.org/2001/XMLSchema#integer"
                                          : "http://www.w3.org/2001/XMLSchema#decimal");
        }
        throw std::runtime_error("unrecognized term: " + word);
    }
};

}  // namespace

RdfDataset dataset_from_text(const std::string& text) {
    RdfDataset d;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        LineLexer lex{line};
        if (lex.done()) continue;
        try {
            Term s = lex.next_term();
            Term p = lex.next_term();
            Term o = lex.next_term();
            std::string graph;
            lex.skip_ws();
            if (!lex.done() && lex.s[lex.i] == '<') {
                Term g = lex.next_term();
                graph = g.lexical;
            }
            lex.skip_ws();
            if (!lex.done() && lex.s[lex.i] == '.') ++lex.i;
            RdfTriple t{std::move(s), std::move(p), std::move(o)};
            if (!valid_rdf_triple(t))
                throw std::runtime_error("triple violates RDF positional typing");
            if (graph.empty()) {
                d.default_graph.push_back(std::move(t));
            } else {
                d.named[graph].push_back(std::move(t));
            }
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return d;
}

RdfDataset load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return dataset_from_text(buf.str());
}

}  // namespace sparqlstat
