#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqlstat/pattern.hpp"

namespace sparqlstat {

struct PreconditionViolated : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotUnionFree : PreconditionViolated {
    using PreconditionViolated::PreconditionViolated;
};

// --- safety -------------------------------------------------------------------

struct SafetyResult {
    bool safe = true;
    PatternPath violating_filter;  // set when !safe
    std::string variable;          // one constraint variable outside the child's vars
};

/// var(C) ⊆ var(P) for every subpattern P FILTER C.
SafetyResult is_safe(const Pattern& p);

// --- UNION normal form ---------------------------------------------------------

bool is_union_free(const Pattern& p);

/// Top-level union of union-free patterns (union-free counts, n = 1).
bool is_unf(const Pattern& p);

/// Union-free branches of a UNF pattern, left to right.
std::vector<const Pattern*> unf_branches(const Pattern& p);

struct UnfResult {
    PatternPtr pattern;        // set when rewritable
    bool rewritable = false;
    bool exceeded_limit = false;   // distribution grew past the branch cap
    PatternPath blocking_opt;      // when !rewritable: Opt whose right side keeps a Union

    std::vector<const Pattern*> branches() const {
        return pattern ? unf_branches(*pattern) : std::vector<const Pattern*>{};
    }
};

/// Distributes UNION out of AND (both sides), OPT (left side), FILTER and
/// GRAPH until fixpoint. A UNION remaining inside the right side of an OPT
/// blocks the rewrite. Inputs already in UNF are returned unchanged.
UnfResult to_unf(const Pattern& p, std::size_t max_branches = 4096);

// --- well-designedness -----------------------------------------------------------

enum class WdStatus { WellDesigned, NotWellDesigned };

enum class WdReason {
    GraphOrNonBuiltin,     // step 1: GRAPH operator or a non-built-in condition
    NotUnf,                // step 1: not in UNION normal form
    UnionBranchFails,      // step 2: some union-free branch is not well-designed
    UnsafeFilter,          // step 3: safety violated
    OptConditionViolated,  // step 3: the OPT variable condition fails
    AllBranchesWd,         // positive: UNF with all branches well-designed
    UnionFreeWd,           // positive: union-free and well-designed
};

const char* to_string(WdStatus s);
const char* to_string(WdReason r);

struct WdWitness {
    PatternPath subpattern;  // the filter or OPT node
    std::string variable;
};

struct WdVerdict {
    WdStatus status = WdStatus::WellDesigned;
    WdReason reason = WdReason::UnionFreeWd;
    std::optional<WdWitness> witness;

    bool well_designed() const { return status == WdStatus::WellDesigned; }
};

WdVerdict is_well_designed_pattern(const Pattern& p);
WdVerdict is_well_designed(const Query& q);

// --- OPT analyses -----------------------------------------------------------------

/// var(P2) ⊆ var(P1) for every OPT subpattern, variables counted with filter
/// occurrences. Throws NotUnionFree on union-carrying input.
bool is_opt_monotonic(const Pattern& p);

/// Replaces every OPT(P1, P2) by P1. Satisfiability-equivalent for
/// well-designed union-free patterns; throws PreconditionViolated otherwise.
PatternPtr opt_core(const Pattern& p);

/// Unconditional variant backing the chained-OPT pool heuristic; no
/// equivalence claim is attached.
PatternPtr opt_core_unchecked(const Pattern& p);

// --- strong UNION normal form ------------------------------------------------------

/// AND/FILTER over triple patterns only.
bool is_af_pattern(const Pattern& p);

/// Top-level union of AF-patterns whose filters carry single atomic
/// constraints.
bool is_strong_unf(const Pattern& p);

/// Pushes negations to atoms, splits conjunctive filters, turns disjunctive
/// filters into unions and distributes to top level. Requires an OPT-free,
/// GRAPH-free input; throws PreconditionViolated otherwise.
PatternPtr to_strong_unf(const Pattern& p);

/// Every filter constraint uses the built-in vocabulary only.
bool pattern_built_in_only(const Pattern& p);

}  // namespace sparqlstat
