#pragma once

#include <random>
#include <vector>

#include "sparqlstat/dataset.hpp"
#include "sparqlstat/pattern.hpp"

namespace sparqlstat::testing {

struct GenOptions {
    int max_depth = 5;
    bool allow_union = true;
    bool allow_opt = true;
    bool allow_graph = true;
    bool allow_filter = true;
    bool safe_filters_only = false;
    // when set, OPT right sides draw variables from the left side only
    bool opt_monotonic_only = false;
    int max_fresh_vars = 6;
};

PatternPtr random_pattern(std::mt19937& rng, const GenOptions& opts);

/// Quantifier-style reading of the well-designedness definition, written
/// independently of the production checker: enumerate OPT subpatterns and
/// all variables, decide by occurrence counting.
bool definitional_well_designed(const Pattern& p);

/// All datasets whose default graph is a subset (of size <= max_triples) of
/// the candidate list.
std::vector<RdfDataset> all_subset_graphs(const std::vector<RdfTriple>& candidates,
                                          std::size_t max_triples);

/// Candidate triples shaped like the pattern's triple patterns, instantiated
/// over the pattern's constants plus the given extra terms.
std::vector<RdfTriple> shaped_candidates(const Pattern& p,
                                         const std::vector<Term>& extra);

}  // namespace sparqlstat::testing
