#pragma once

// Internal evaluation machinery shared by the public evaluator and the
// oracle searches: interned terms, slot-indexed mappings, and a compiled
// pattern tree. Not part of the public API.

#include <array>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "sparqlstat/dataset.hpp"
#include "sparqlstat/eval.hpp"
#include "sparqlstat/pattern.hpp"

namespace sparqlstat::detail {

struct TermPool {
    std::set<Term> storage;
    const Term* intern(const Term& t) { return &*storage.insert(t).first; }
};

using ITriple = std::array<const Term*, 3>;
using IGraph = std::vector<ITriple>;

struct IDataset {
    IGraph default_graph;
    std::vector<std::pair<const Term*, IGraph>> named;  // sorted by name pointer key()

    const IGraph* find_named(const Term* name) const {
        for (const auto& [n, g] : named)
            if (n == name) return &g;
        return nullptr;
    }
};

/// Slot-indexed mapping; nullptr marks an unbound slot.
using IMapping = std::vector<const Term*>;
using IMappingSet = std::vector<IMapping>;  // kept sorted and unique

void canonicalize(IMappingSet& s);
bool imapping_subsumed(const IMapping& a, const IMapping& b);
bool iset_subsumed(const IMappingSet& a, const IMappingSet& b);
bool iset_included(const IMappingSet& a, const IMappingSet& b);

struct CompiledNode {
    PatternKind kind = PatternKind::Empty;
    // Triple: slot >= 0 means variable, else the interned constant applies.
    int slots[3] = {-1, -1, -1};
    const Term* terms[3] = {nullptr, nullptr, nullptr};
    std::unique_ptr<CompiledNode> left, right;
    const Term* graph_name = nullptr;  // GraphIri
    int graph_slot = -1;               // GraphVar
    const Constraint* condition = nullptr;
};

struct CompiledPattern {
    std::vector<std::string> slot_names;          // slot -> variable name
    std::map<std::string, int> slot_of;
    std::unique_ptr<CompiledNode> root;
    std::size_t var_count() const { return slot_names.size(); }
};

/// Slots cover all occurrence variables of the pattern (constraint-only
/// variables resolve to unbound).
CompiledPattern compile_pattern(const Pattern& p, TermPool& pool);

IDataset intern_dataset(const RdfDataset& d, TermPool& pool);

IMappingSet eval_compiled(const CompiledPattern& cp, const IDataset& d);

/// Evaluation against a bare graph used as the default graph.
IMappingSet eval_on_graph(const CompiledPattern& cp, const IGraph& g);

/// Truth of an atom given resolved argument terms (null = unbound); the
/// atom's negated flag is applied.
TruthValue3 atom_truth(const AtomicConstraint& a, const Term* t1, const Term* t2);

TruthValue3 constraint_truth(const Constraint& c, const CompiledPattern& cp,
                             const IMapping& m);

Mapping to_public_mapping(const IMapping& m, const CompiledPattern& cp);
MappingSet to_public_set(const IMappingSet& s, const CompiledPattern& cp);

}  // namespace sparqlstat::detail
