#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "sparqlstat/dataset.hpp"
#include "sparqlstat/pattern.hpp"

namespace sparqlstat {

// --- three-valued logic -----------------------------------------------------

enum class TruthValue3 { True, False, Error };

TruthValue3 and3(TruthValue3 a, TruthValue3 b);
TruthValue3 or3(TruthValue3 a, TruthValue3 b);
TruthValue3 not3(TruthValue3 a);

// --- mappings ----------------------------------------------------------------

/// Partial function from variables to constants.
using Mapping = std::map<std::string, Term>;
using MappingSet = std::set<Mapping>;

/// dom(m1) ⊆ dom(m2) and agreement on dom(m1).
bool mapping_subsumed(const Mapping& m1, const Mapping& m2);

/// Every mapping of s1 is subsumed by some mapping of s2.
bool subsumed(const MappingSet& s1, const MappingSet& s2);

bool mappings_compatible(const Mapping& m1, const Mapping& m2);

// --- evaluation ---------------------------------------------------------------

/// Reference semantics of a pattern over a dataset (the default graph is the
/// initially active graph).
MappingSet eval_pattern(const Pattern& p, const RdfDataset& d);

/// Three-valued satisfaction of a constraint under a mapping. Atoms other
/// than bound() that reference an unbound variable evaluate to Error, as do
/// type-incompatible comparisons.
TruthValue3 eval_constraint(const Constraint& c, const Mapping& m);
TruthValue3 eval_atomic(const AtomicConstraint& a, const Mapping& m);

/// Pattern evaluation followed by projection onto the query's variable set.
MappingSet eval_query(const Query& q, const RdfDataset& d);

}  // namespace sparqlstat
