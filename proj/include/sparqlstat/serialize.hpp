#pragma once

#include <string>

#include "sparqlstat/pattern.hpp"

namespace sparqlstat {

/// Concrete-syntax form of a term (<iri>, "literal", ?var, canonical bare
/// numerics and booleans).
std::string term_to_sparql(const Term& t);

std::string constraint_to_sparql(const Constraint& c);

/// Pattern as a braced group, e.g. "{ ?x <p> ?y . { ?y <q> ?z } }".
/// Reparsing the output yields a structurally equal tree.
std::string serialize_pattern(const Pattern& p);

/// Full SELECT query text; parse_query(serialize(q)) equals q structurally.
std::string serialize(const Query& q);

}  // namespace sparqlstat
