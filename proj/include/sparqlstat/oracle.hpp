#pragma once

#include <cstdint>
#include <optional>

#include "sparqlstat/eval.hpp"

namespace sparqlstat {

/// Bounds for the brute-force searches. The defaults are the acceptance
/// budget: graphs of at most 4 triples over the pattern's constants plus
/// three fresh constants (an IRI, a plain literal, a numeric literal).
struct OracleBudget {
    std::size_t max_graph_triples = 4;
    std::size_t max_pool = 256;          // candidate triple instantiations
    std::uint64_t max_checks = 500'000'000;
};

enum class SearchStatus { Found, NoneWithinBudget, BudgetExceeded };

enum class MonoMode {
    Plain,  // reports any mu in [[p]]G1 \ [[p]]G2
    Weak,   // reports mu in [[p]]G1 with no extension in [[p]]G2
};

struct MonoCounterexample {
    RdfDataset g1;
    RdfDataset g2;  // g1 plus one triple
    Mapping witness;
};

struct MonoSearchResult {
    SearchStatus status = SearchStatus::NoneWithinBudget;
    std::optional<MonoCounterexample> counterexample;
    std::uint64_t checks = 0;
};

/// Enumerates pairs G1 ⊆ G2 = G1 ∪ {t} of default graphs shaped like the
/// pattern's triple patterns and looks for a monotonicity violation.
/// Single-triple extensions lose no generality: subsumption and inclusion
/// are transitive along any chain of one-triple growth. GRAPH subpatterns
/// see an empty set of named graphs; strip them first.
MonoSearchResult search_monotonicity_counterexample(const Pattern& p, MonoMode mode,
                                                    const OracleBudget& budget = {});

/// Replays a counterexample through the reference evaluator.
bool verify_counterexample(const Pattern& p, MonoMode mode, const MonoCounterexample& c);

struct SatSearchResult {
    SearchStatus status = SearchStatus::NoneWithinBudget;
    std::optional<RdfDataset> witness;
    /// True when an exhausted search is conclusive for the input: OPT-free
    /// patterns whose constraints stay inside the bound/equality/type
    /// vocabulary. A NoneWithinBudget with exhaustive=false is just
    /// inconclusive.
    bool exhaustive = false;
    std::uint64_t checks = 0;
};

/// Searches for a dataset with a nonempty evaluation: first by instantiating
/// the pattern's triples over a small term universe, then (for OPT-carrying
/// patterns) by enumerating subsets of the instantiation pool.
SatSearchResult brute_force_satisfiable(const Pattern& p, const OracleBudget& budget = {});

}  // namespace sparqlstat
