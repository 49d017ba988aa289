#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sparqlstat/term.hpp"

namespace sparqlstat {

using RdfTriple = std::array<Term, 3>;

/// Triple validity for data: (I∪B) x I x (I∪B∪L).
bool valid_rdf_triple(const RdfTriple& t);

/// Default graph plus named graphs.
struct RdfDataset {
    std::vector<RdfTriple> default_graph;
    std::map<std::string, std::vector<RdfTriple>> named;  // keyed by graph IRI

    void add(Term s, Term p, Term o);
    void add_named(const std::string& graph, Term s, Term p, Term o);
    std::size_t size() const;

    bool operator==(const RdfDataset& o) const = default;
};

/// Line-based N-Triples-style text: one triple per line, IRIs in angle
/// brackets, literals quoted, blank nodes as _:label. An optional fourth
/// term (an IRI) names the triple's graph, N-Quads style.
std::string dataset_to_text(const RdfDataset& d);

/// Parses the format above. Throws std::runtime_error on malformed lines.
RdfDataset dataset_from_text(const std::string& text);

RdfDataset load_dataset_file(const std::string& path);

}  // namespace sparqlstat
