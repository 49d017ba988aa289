#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sparqlstat/term.hpp"

namespace sparqlstat {

/// The atomic constraint vocabulary. Everything the filter grammar accepts
/// but this enumeration does not cover survives parsing as Opaque (a
/// non-built-in condition).
enum class AtomKind {
    Bound,        // bound(?x)
    EqConst,      // ?x = c
    EqVar,        // ?x = ?y
    LtConst,      // ?x < c
    LeqConst,     // ?x <= c
    GtConst,      // ?x > c
    GeqConst,     // ?x >= c
    IsIri,        // isIRI(?x)
    IsBlank,      // isBlank(?x)
    IsLiteral,    // isLiteral(?x)
    StrEqConst,   // str(?x) = c
    LangEqConst,  // lang(?x) = c
    LangMatches,  // langMatches(lang(?x), c)
    RegexStr,     // regex(str(?x), r)
    RegexVar,     // regex(?x, r)
    Opaque,       // anything else, kept as raw text
};

struct AtomicConstraint {
    AtomKind kind = AtomKind::Bound;
    bool negated = false;
    std::string var;   // primary variable (without '?')
    std::string var2;  // EqVar only
    Term constant;     // EqConst and order comparisons
    std::string text;  // lang range, regex, str constant, or opaque text

    std::vector<std::string> opaque_vars;  // variables mentioned in Opaque

    AtomicConstraint negation() const {
        AtomicConstraint a = *this;
        a.negated = !a.negated;
        return a;
    }

    std::set<std::string> variables() const;

    bool operator==(const AtomicConstraint& o) const = default;

    /// Stable identity for set membership and conflict matching. EqVar is
    /// symmetric, so the variable pair is ordered here.
    std::string key() const;
};

enum class ConstraintKind { Atomic, And, Or, Not };

struct Constraint;
using ConstraintPtr = std::unique_ptr<Constraint>;

/// A boolean combination of atomic constraints.
struct Constraint {
    ConstraintKind kind = ConstraintKind::Atomic;
    AtomicConstraint atom;       // Atomic
    ConstraintPtr left, right;   // And/Or both, Not left only

    static ConstraintPtr atomic(AtomicConstraint a);
    static ConstraintPtr conj(ConstraintPtr l, ConstraintPtr r);
    static ConstraintPtr disj(ConstraintPtr l, ConstraintPtr r);
    static ConstraintPtr negate(ConstraintPtr c);

    ConstraintPtr clone() const;
    bool equals(const Constraint& o) const;

    std::set<std::string> variables() const;

    /// True when every atom belongs to the Table-style built-in vocabulary
    /// (no Opaque leaves).
    bool built_in_only() const;

    /// Some atom `bound(?v)` occurs under an odd number of negations
    /// (counting the atom's own flag), i.e. the NNF contains ¬bound.
    bool contains_negated_bound() const;

    /// Negation normal form: Not nodes pushed into the atoms' negated flag
    /// via De Morgan (valid under the three-valued connectives).
    ConstraintPtr to_nnf() const;

    std::string key() const;
};

}  // namespace sparqlstat
