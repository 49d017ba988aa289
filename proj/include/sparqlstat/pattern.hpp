#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sparqlstat/constraint.hpp"
#include "sparqlstat/term.hpp"

namespace sparqlstat {

enum class PatternKind { Triple, And, Union, Opt, GraphIri, GraphVar, Filter, Empty };

struct Pattern;
using PatternPtr = std::unique_ptr<Pattern>;

/// Algebra tree over triple patterns. Children are owned exactly once; the
/// tree is never shared between nodes.
struct Pattern {
    PatternKind kind = PatternKind::Empty;
    TriplePattern triple;       // Triple
    PatternPtr left, right;     // And/Union/Opt both; Graph*/Filter left only
    Term graph;                 // GraphIri: Iri term, GraphVar: Variable term
    ConstraintPtr condition;    // Filter

    static PatternPtr empty();
    static PatternPtr triple_pattern(TriplePattern tp);
    static PatternPtr conj(PatternPtr l, PatternPtr r);
    static PatternPtr disj(PatternPtr l, PatternPtr r);
    static PatternPtr opt(PatternPtr l, PatternPtr r);
    static PatternPtr graph_iri(Term iri, PatternPtr child);
    static PatternPtr graph_var(Term var, PatternPtr child);
    static PatternPtr filter(PatternPtr child, ConstraintPtr c);

    PatternPtr clone() const;
    bool equals(const Pattern& o) const;
};

/// Path from the root to a subpattern: 0 = left/only child, 1 = right child.
using PatternPath = std::vector<int>;

const Pattern* subpattern_at(const Pattern& root, const PatternPath& path);
std::string path_to_string(const PatternPath& path);

/// SELECT query: projection set plus body pattern.
struct Query {
    std::vector<std::string> projection;  // sorted, duplicate-free
    PatternPtr body;

    Query clone() const;
    bool equals(const Query& o) const;
};

// --- purely syntactic measures ---------------------------------------------

std::size_t count_triple_patterns(const Pattern& p);

/// Variables occurring in triple patterns and GRAPH ?x nodes. Filter
/// constraint variables are *not* included; see constraint_vars and
/// occurrence_vars.
std::set<std::string> pattern_vars(const Pattern& p);

std::set<std::string> constraint_vars(const Constraint& c);

/// Variables occurring anywhere in the subtree, filter constraints included.
/// This is var(P) in the sense used by the well-designedness condition.
std::set<std::string> occurrence_vars(const Pattern& p);

/// Operator fragment of a pattern, a subset of {A, F, G, O, U}.
struct FragmentSignature {
    bool has_and = false;
    bool has_filter = false;
    bool has_graph = false;
    bool has_opt = false;
    bool has_union = false;

    bool operator==(const FragmentSignature& o) const = default;

    /// Canonical letter word (A,F,G,O,U order), "none" when empty.
    std::string to_string() const;
    static FragmentSignature from_string(const std::string& s);
};

FragmentSignature fragment_signature(const Pattern& p);

bool contains_opt(const Pattern& p);
bool contains_union(const Pattern& p);
bool contains_graph(const Pattern& p);
bool contains_filter(const Pattern& p);

/// All constants (IRIs and literals) mentioned in triple patterns, GRAPH
/// names and filter constraints; the seed universe for the oracles.
std::vector<Term> pattern_constants(const Pattern& p);

}  // namespace sparqlstat
