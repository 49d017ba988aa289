#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sparqlstat/normal_forms.hpp"
#include "sparqlstat/oracle.hpp"

namespace sparqlstat {

/// Consequences of one inference-rule row for the given atom, split at the
/// row's top-level conjunction. Atoms without a row (bound, negated order
/// comparisons) yield the empty set; self-inference is omitted.
std::vector<ConstraintPtr> apply_inference_rules(const AtomicConstraint& a);

/// One branch of the closure: atoms plus not-yet-decomposed compounds.
struct ConstraintSet {
    std::vector<AtomicConstraint> atoms;      // insertion order
    std::set<std::string> atom_keys;          // normalized keys
    std::vector<ConstraintPtr> compounds;     // pending And/Or elements
    std::set<std::string> compound_keys;
    bool changed = true;

    ConstraintSet() = default;
    ConstraintSet(const ConstraintSet& o);
    ConstraintSet& operator=(const ConstraintSet& o);
    ConstraintSet(ConstraintSet&&) = default;
    ConstraintSet& operator=(ConstraintSet&&) = default;

    bool has_atom(const AtomicConstraint& a) const { return atom_keys.count(a.key()) > 0; }
    bool insert_atom(const AtomicConstraint& a);
    bool insert(const Constraint& c);  // dispatches on atom/compound
};

struct Closure {
    std::vector<ConstraintSet> branches;
};

struct SatOptions {
    bool use_oracle = false;       // resolve the negated-bound pool by search
    bool pool_heuristics = false;  // chained-OPT and strict-safety resolution
    bool extended_conflicts = false;
    OracleBudget budget;
};

/// Fixpoint of rule application, conjunction decomposition and disjunction
/// branching over the initial constraint set.
Closure closure(const std::vector<const Constraint*>& initial,
                const std::vector<AtomicConstraint>& seed_atoms = {},
                const SatOptions& opts = {});

struct ConflictPair {
    AtomicConstraint atom;
    AtomicConstraint complement;
};

/// A set is close when it contains some atom together with its negation.
std::optional<ConflictPair> find_conflict(const ConstraintSet& s);
inline bool is_close(const ConstraintSet& s) { return find_conflict(s).has_value(); }

enum class SatStatus { Satisfiable, Unsatisfiable, Pooled };

enum class SatRule {
    DatasetWitness,
    FilterFree,
    ClosureOpen,
    ClosureClosed,
    NegatedBoundPool,
    NonWdPool,
    HeuristicP1,
    StrictSafetyRule,
};

const char* to_string(SatStatus s);
const char* to_string(SatRule r);

struct SatVerdict {
    SatStatus status = SatStatus::Satisfiable;
    SatRule rule = SatRule::FilterFree;
    std::optional<RdfDataset> witness;
    std::optional<ConflictPair> conflict;
};

/// The closure test over a strong-UNF pattern: satisfiable iff some branch
/// of some union member stays open. Triple-pattern variables are seeded as
/// bound() atoms (every solution binds them).
SatVerdict algorithm1(const Pattern& strong_unf, const SatOptions& opts = {});

/// The full six-step procedure.
SatVerdict check_satisfiability(const Query& q, const RdfDataset* reference = nullptr,
                                const SatOptions& opts = {});
SatVerdict check_satisfiability_pattern(const Pattern& body,
                                        const RdfDataset* reference = nullptr,
                                        const SatOptions& opts = {});

}  // namespace sparqlstat
