#include "sparqlstat/satisfiability.hpp"

#include <cassert>
#include <stdexcept>

#include "sparqlstat/eval.hpp"

namespace sparqlstat {

const char* to_string(SatStatus s) {
    switch (s) {
        case SatStatus::Satisfiable: return "Satisfiable";
        case SatStatus::Unsatisfiable: return "Unsatisfiable";
        case SatStatus::Pooled: return "Pooled";
    }
    return "";
}

const char* to_string(SatRule r) {
    switch (r) {
        case SatRule::DatasetWitness: return "DatasetWitness";
        case SatRule::FilterFree: return "FilterFree";
        case SatRule::ClosureOpen: return "ClosureOpen";
        case SatRule::ClosureClosed: return "ClosureClosed";
        case SatRule::NegatedBoundPool: return "NegatedBoundPool";
        case SatRule::NonWdPool: return "NonWdPool";
        case SatRule::HeuristicP1: return "HeuristicP1";
        case SatRule::StrictSafetyRule: return "StrictSafetyRule";
    }
    return "";
}

// --- inference rules -----------------------------------------------------------

namespace {

AtomicConstraint atom1(AtomKind kind, const std::string& var, bool negated = false) {
    AtomicConstraint a;
    a.kind = kind;
    a.var = var;
    a.negated = negated;
    return a;
}

AtomicConstraint atom_const(AtomKind kind, const std::string& var, const Term& c,
                            bool negated = false) {
    AtomicConstraint a = atom1(kind, var, negated);
    a.constant = c;
    return a;
}

AtomicConstraint atom_text(AtomKind kind, const std::string& var, const std::string& text,
                           bool negated = false) {
    AtomicConstraint a = atom1(kind, var, negated);
    a.text = text;
    return a;
}

ConstraintPtr ca(AtomicConstraint a) { return Constraint::atomic(std::move(a)); }

// (¬isBlank(?x) ∧ ¬isIRI(?x)) — the pair shared by the literal-flavoured rows
ConstraintPtr not_blank_not_iri(const std::string& v) {
    return Constraint::conj(ca(atom1(AtomKind::IsBlank, v, true)),
                            ca(atom1(AtomKind::IsIri, v, true)));
}

}  // namespace

std::vector<ConstraintPtr> apply_inference_rules(const AtomicConstraint& a) {
    std::vector<ConstraintPtr> out;
    const std::string& v = a.var;
    auto bound = [&v]() { return ca(atom1(AtomKind::Bound, v)); };
    switch (a.kind) {
        case AtomKind::Bound:
        case AtomKind::Opaque:
            return out;  // no row
        case AtomKind::EqConst:  // rows "?x=c" and "?x≠c"
            out.push_back(bound());
            return out;
        case AtomKind::EqVar:    // rows "?x=?y" and "?x≠?y"
            out.push_back(bound());
            out.push_back(ca(atom1(AtomKind::Bound, a.var2)));
            return out;
        case AtomKind::GtConst:  // ?x>c ⊢ ((?x≥c) ∧ (?x≠c)) ∧ isLiteral ∧ ...
        case AtomKind::LtConst:
        case AtomKind::LeqConst:
        case AtomKind::GeqConst: {
            if (a.negated) return out;  // no row for negated order atoms
            switch (a.kind) {
                case AtomKind::GtConst:
                    out.push_back(Constraint::conj(
                        ca(atom_const(AtomKind::GeqConst, v, a.constant)),
                        ca(atom_const(AtomKind::EqConst, v, a.constant, true))));
                    break;
                case AtomKind::LtConst:
                    out.push_back(Constraint::conj(
                        ca(atom_const(AtomKind::LeqConst, v, a.constant)),
                        ca(atom_const(AtomKind::EqConst, v, a.constant, true))));
                    break;
                case AtomKind::LeqConst:
                    out.push_back(Constraint::disj(
                        ca(atom_const(AtomKind::LtConst, v, a.constant)),
                        ca(atom_const(AtomKind::EqConst, v, a.constant))));
                    break;
                default:  // GeqConst
                    out.push_back(Constraint::disj(
                        ca(atom_const(AtomKind::GtConst, v, a.constant)),
                        ca(atom_const(AtomKind::EqConst, v, a.constant))));
                    break;
            }
            out.push_back(ca(atom1(AtomKind::IsLiteral, v)));
            out.push_back(not_blank_not_iri(v));
            out.push_back(bound());
            return out;
        }
        case AtomKind::IsLiteral:
            if (!a.negated) {
                out.push_back(not_blank_not_iri(v));
            } else {
                out.push_back(Constraint::disj(ca(atom1(AtomKind::IsBlank, v)),
                                               ca(atom1(AtomKind::IsIri, v))));
            }
            out.push_back(bound());
            return out;
        case AtomKind::IsBlank:
            if (!a.negated) {
                out.push_back(Constraint::conj(ca(atom1(AtomKind::IsLiteral, v, true)),
                                               ca(atom1(AtomKind::IsIri, v, true))));
            } else {
                out.push_back(Constraint::disj(ca(atom1(AtomKind::IsLiteral, v)),
                                               ca(atom1(AtomKind::IsIri, v))));
            }
            out.push_back(bound());
            return out;
        case AtomKind::IsIri:
            if (!a.negated) {
                out.push_back(Constraint::conj(ca(atom1(AtomKind::IsBlank, v, true)),
                                               ca(atom1(AtomKind::IsLiteral, v, true))));
            } else {
                out.push_back(Constraint::disj(ca(atom1(AtomKind::IsLiteral, v)),
                                               ca(atom1(AtomKind::IsBlank, v))));
            }
            out.push_back(bound());
            return out;
        case AtomKind::StrEqConst:  // rows "str(?x)=c" and "str(?x)≠c"
            out.push_back(Constraint::disj(ca(atom1(AtomKind::IsLiteral, v)),
                                           ca(atom1(AtomKind::IsIri, v))));
            out.push_back(ca(atom1(AtomKind::IsBlank, v, true)));
            out.push_back(bound());
            return out;
        case AtomKind::LangEqConst:  // rows "lang(?x)=c" / "lang(?x)≠c"
            out.push_back(ca(atom_text(AtomKind::LangMatches, v, a.text, a.negated)));
            out.push_back(ca(atom1(AtomKind::IsLiteral, v)));
            out.push_back(not_blank_not_iri(v));
            out.push_back(bound());
            return out;
        case AtomKind::LangMatches:  // rows "langMatches(lang(?x),c)" / negated
            out.push_back(ca(atom_text(AtomKind::LangEqConst, v, a.text, a.negated)));
            out.push_back(ca(atom1(AtomKind::IsLiteral, v)));
            out.push_back(not_blank_not_iri(v));
            out.push_back(bound());
            return out;
        case AtomKind::RegexStr:  // rows "Regex(str(?x),r)" / negated
            out.push_back(Constraint::disj(ca(atom1(AtomKind::IsLiteral, v)),
                                           ca(atom1(AtomKind::IsIri, v))));
            out.push_back(bound());
            out.push_back(ca(atom1(AtomKind::IsBlank, v, true)));
            return out;
        case AtomKind::RegexVar:  // rows "Regex(?x,r)" / negated
            out.push_back(ca(atom_text(AtomKind::RegexStr, v, a.text, a.negated)));
            out.push_back(ca(atom1(AtomKind::IsLiteral, v)));
            out.push_back(not_blank_not_iri(v));
            out.push_back(bound());
            return out;
    }
    return out;
}

// --- rule-table termination self-check --------------------------------------------

namespace {

// The closure terminates because rule consequences never mention fresh
// variables or constants. Checked once over probe atoms of every kind and
// polarity.
void collect_atoms_rec(const Constraint& c, std::vector<AtomicConstraint>& out) {
    if (c.kind == ConstraintKind::Atomic) {
        out.push_back(c.atom);
        return;
    }
    if (c.left) collect_atoms_rec(*c.left, out);
    if (c.right) collect_atoms_rec(*c.right, out);
}

bool rule_table_is_closed() {
    const Term probe_consts[] = {Term::iri("c"), Term::literal("c"),
                                 Term::literal("5", "",
                                               "http://www.w3.org/2001/XMLSchema#integer")};
    for (int kind = 0; kind <= static_cast<int>(AtomKind::RegexVar); ++kind) {
        for (bool negated : {false, true}) {
            for (const Term& c : probe_consts) {
                AtomicConstraint probe;
                probe.kind = static_cast<AtomKind>(kind);
                probe.negated = negated;
                probe.var = "x";
                probe.var2 = "y";
                probe.constant = c;
                probe.text = "t";
                // breadth-first closure of the probe under the rules
                std::set<std::string> seen{probe.key()};
                std::vector<AtomicConstraint> frontier{probe};
                int rounds = 0;
                while (!frontier.empty()) {
                    if (++rounds > 64) return false;  // would not terminate
                    std::vector<AtomicConstraint> next;
                    for (const auto& a : frontier) {
                        for (const auto& cons : apply_inference_rules(a)) {
                            std::vector<AtomicConstraint> atoms;
                            collect_atoms_rec(*cons, atoms);
                            for (auto& d : atoms) {
                                if (d.var != "x" && d.var != "y") return false;
                                if (d.kind == AtomKind::EqConst ||
                                    d.kind == AtomKind::LtConst ||
                                    d.kind == AtomKind::LeqConst ||
                                    d.kind == AtomKind::GtConst ||
                                    d.kind == AtomKind::GeqConst) {
                                    if (!(d.constant == probe.constant)) return false;
                                }
                                if (seen.insert(d.key()).second) next.push_back(d);
                            }
                        }
                    }
                    frontier = std::move(next);
                }
            }
        }
    }
    return true;
}

void assert_rule_table_closed() {
    static const bool ok = rule_table_is_closed();
    if (!ok)
        throw std::logic_error(
            "inference rule table escapes its atom universe; closure would diverge");
}

}  // namespace

// --- closure ------------------------------------------------------------------------

ConstraintSet::ConstraintSet(const ConstraintSet& o)
    : atoms(o.atoms),
      atom_keys(o.atom_keys),
      compound_keys(o.compound_keys),
      changed(o.changed) {
    compounds.reserve(o.compounds.size());
    for (const auto& c : o.compounds) compounds.push_back(c->clone());
}

ConstraintSet& ConstraintSet::operator=(const ConstraintSet& o) {
    if (this == &o) return *this;
    ConstraintSet tmp(o);
    *this = std::move(tmp);
    return *this;
}

bool ConstraintSet::insert_atom(const AtomicConstraint& a) {
    if (!atom_keys.insert(a.key()).second) return false;
    atoms.push_back(a);
    return true;
}

bool ConstraintSet::insert(const Constraint& c) {
    if (c.kind == ConstraintKind::Atomic) return insert_atom(c.atom);
    if (!compound_keys.insert(c.key()).second) return false;
    compounds.push_back(c.clone());
    return true;
}

namespace {

// Constant-kind consequence of a positive equality: the variable takes the
// constant's kind. Keeps the closure conclusive when equalities meet type
// atoms; never fires on anything a solution could satisfy differently.
std::optional<AtomicConstraint> constant_kind_atom(const AtomicConstraint& a) {
    if (a.kind != AtomKind::EqConst || a.negated) return std::nullopt;
    if (a.constant.is_iri()) return atom1(AtomKind::IsIri, a.var);
    if (a.constant.is_literal()) return atom1(AtomKind::IsLiteral, a.var);
    return std::nullopt;
}

bool grow_set(ConstraintSet& s, std::vector<ConstraintSet>& spawned) {
    bool changed = false;
    // rule application over the atoms present
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        AtomicConstraint a = s.atoms[i];  // copy: the vector may grow
        for (const auto& d : apply_inference_rules(a)) {
            if (s.insert(*d)) changed = true;
        }
        if (auto k = constant_kind_atom(a)) {
            if (s.insert_atom(*k)) changed = true;
        }
    }
    // conjunction decomposition and disjunction branching
    for (std::size_t i = 0; i < s.compounds.size(); ++i) {
        const Constraint& c = *s.compounds[i];
        if (c.kind == ConstraintKind::And) {
            if (s.insert(*c.left)) changed = true;
            if (s.insert(*c.right)) changed = true;
        } else if (c.kind == ConstraintKind::Or) {
            auto present = [&s](const Constraint& d) {
                if (d.kind == ConstraintKind::Atomic) return s.has_atom(d.atom);
                return s.compound_keys.count(d.key()) > 0;
            };
            if (!present(*c.left) && !present(*c.right)) {
                ConstraintSet forked = s;
                forked.insert(*c.right);
                forked.changed = true;
                spawned.push_back(std::move(forked));
                s.insert(*c.left);
                changed = true;
            }
        } else if (c.kind == ConstraintKind::Not) {
            // push the negation down and reinsert
            if (s.insert(*c.to_nnf())) changed = true;
        }
    }
    return changed;
}

}  // namespace

Closure closure(const std::vector<const Constraint*>& initial,
                const std::vector<AtomicConstraint>& seed_atoms, const SatOptions& opts) {
    (void)opts;
    assert_rule_table_closed();
    Closure cl;
    ConstraintSet s0;
    for (const auto& a : seed_atoms) s0.insert_atom(a);
    for (const Constraint* c : initial) s0.insert(*c->to_nnf());
    cl.branches.push_back(std::move(s0));

    bool any = true;
    while (any) {
        any = false;
        std::vector<ConstraintSet> spawned;
        for (auto& s : cl.branches) {
            if (!s.changed) continue;
            s.changed = false;
            if (grow_set(s, spawned)) {
                s.changed = true;
                any = true;
            }
        }
        if (!spawned.empty()) {
            any = true;
            for (auto& s : spawned) cl.branches.push_back(std::move(s));
        }
    }
    return cl;
}

std::optional<ConflictPair> find_conflict(const ConstraintSet& s) {
    for (const auto& a : s.atoms) {
        AtomicConstraint neg = a.negation();
        if (s.atom_keys.count(neg.key())) {
            // report the positive atom first
            ConflictPair pair{a.negated ? neg : a, a.negated ? a : neg};
            return pair;
        }
    }
    return std::nullopt;
}

// --- extended conflicts ---------------------------------------------------------------

namespace {

bool extended_conflict(const ConstraintSet& s) {
    // constant-level equality clashes and order reasoning on one variable
    for (const auto& a : s.atoms) {
        if (a.kind != AtomKind::EqConst || a.negated) continue;
        for (const auto& b : s.atoms) {
            if (&a == &b || b.var != a.var) continue;
            if (b.kind == AtomKind::EqConst && !b.negated && !(b.constant == a.constant))
                return true;
            // any order atom on the same variable must hold under v = constant
            switch (b.kind) {
                case AtomKind::LtConst:
                case AtomKind::LeqConst:
                case AtomKind::GtConst:
                case AtomKind::GeqConst: {
                    Mapping m{{a.var, a.constant}};
                    if (eval_atomic(b, m) != TruthValue3::True) return true;
                    break;
                }
                default:
                    break;
            }
        }
    }
    // numeric bounds: lower > upper closes the set
    std::set<std::string> vars;
    for (const auto& a : s.atoms) vars.insert(a.var);
    for (const auto& v : vars) {
        std::optional<std::string> lower, upper;
        bool lower_strict = false, upper_strict = false;
        for (const auto& a : s.atoms) {
            if (a.var != v || a.negated || !a.constant.is_numeric()) continue;
            const std::string& c = a.constant.lexical;
            if (a.kind == AtomKind::GtConst || a.kind == AtomKind::GeqConst) {
                bool strict = a.kind == AtomKind::GtConst;
                if (!lower || compare_decimal(c, *lower) > 0 ||
                    (compare_decimal(c, *lower) == 0 && strict)) {
                    lower = c;
                    lower_strict = strict;
                }
            }
            if (a.kind == AtomKind::LtConst || a.kind == AtomKind::LeqConst) {
                bool strict = a.kind == AtomKind::LtConst;
                if (!upper || compare_decimal(c, *upper) < 0 ||
                    (compare_decimal(c, *upper) == 0 && strict)) {
                    upper = c;
                    upper_strict = strict;
                }
            }
        }
        if (lower && upper) {
            int cmp = compare_decimal(*lower, *upper);
            if (cmp > 0 || (cmp == 0 && (lower_strict || upper_strict))) return true;
        }
    }
    return false;
}

bool positionally_impossible(const Pattern& af) {
    // extended mode only: a literal subject or a non-IRI predicate constant
    // can never match an RDF triple
    if (af.kind == PatternKind::Triple) {
        const TriplePattern& t = af.triple;
        if (t.subject.is_literal()) return true;
        if (!t.predicate.is_variable() && !t.predicate.is_iri()) return true;
        return false;
    }
    if (af.left && positionally_impossible(*af.left)) return true;
    if (af.right && positionally_impossible(*af.right)) return true;
    return false;
}

void positional_seed_atoms(const Pattern& af, std::vector<AtomicConstraint>& out) {
    if (af.kind == PatternKind::Triple) {
        const TriplePattern& t = af.triple;
        if (t.subject.is_variable())
            out.push_back(atom1(AtomKind::IsLiteral, t.subject.lexical, true));
        if (t.predicate.is_variable())
            out.push_back(atom1(AtomKind::IsIri, t.predicate.lexical));
        return;
    }
    if (af.left) positional_seed_atoms(*af.left, out);
    if (af.right) positional_seed_atoms(*af.right, out);
}

void collect_filter_constraints(const Pattern& p, std::vector<const Constraint*>& out) {
    if (p.kind == PatternKind::Filter) out.push_back(p.condition.get());
    if (p.left) collect_filter_constraints(*p.left, out);
    if (p.right) collect_filter_constraints(*p.right, out);
}

}  // namespace

// --- Algorithm 1 ------------------------------------------------------------------------

SatVerdict algorithm1(const Pattern& strong_unf, const SatOptions& opts) {
    if (!is_unf(strong_unf))
        throw PreconditionViolated("algorithm1 expects a pattern in (strong) UNF");
    SatVerdict verdict;
    std::optional<ConflictPair> first_conflict;
    for (const Pattern* q : unf_branches(strong_unf)) {
        if (!is_af_pattern(*q))
            throw PreconditionViolated("algorithm1 expects AF-patterns in every branch");
        if (opts.extended_conflicts && positionally_impossible(*q)) continue;
        std::vector<const Constraint*> constraints;
        collect_filter_constraints(*q, constraints);
        // every solution binds the triple variables
        std::vector<AtomicConstraint> seeds;
        for (const auto& v : pattern_vars(*q)) seeds.push_back(atom1(AtomKind::Bound, v));
        if (opts.extended_conflicts) positional_seed_atoms(*q, seeds);
        Closure cl = closure(constraints, seeds, opts);
        for (const auto& branch : cl.branches) {
            auto conflict = find_conflict(branch);
            if (conflict && !first_conflict) first_conflict = conflict;
            if (conflict) continue;
            if (opts.extended_conflicts && extended_conflict(branch)) continue;
            verdict.status = SatStatus::Satisfiable;
            verdict.rule = SatRule::ClosureOpen;
            return verdict;
        }
    }
    verdict.status = SatStatus::Unsatisfiable;
    verdict.rule = SatRule::ClosureClosed;
    verdict.conflict = first_conflict;
    return verdict;
}

// --- the six-step procedure ----------------------------------------------------------------

namespace {

bool pattern_has_negated_bound(const Pattern& p) {
    if (p.kind == PatternKind::Filter && p.condition->contains_negated_bound()) return true;
    if (p.left && pattern_has_negated_bound(*p.left)) return true;
    if (p.right && pattern_has_negated_bound(*p.right)) return true;
    return false;
}

// possible truth values of a constraint once atoms over unbindable
// variables are pinned (bound -> False, everything else -> Error)
struct ValueSet {
    bool t = false, f = false, e = false;
};

ValueSet possible_values(const Constraint& c, const std::set<std::string>& unbindable) {
    switch (c.kind) {
        case ConstraintKind::Atomic: {
            const auto& a = c.atom;
            bool touches = false;
            for (const auto& v : a.variables())
                if (unbindable.count(v)) touches = true;
            if (!touches) return {true, true, true};
            if (a.kind == AtomKind::Bound) {
                // bound(v) is False; the negated flag flips it
                return a.negated ? ValueSet{true, false, false}
                                 : ValueSet{false, true, false};
            }
            return {false, false, true};  // Error, negated or not
        }
        case ConstraintKind::Not: {
            ValueSet in = possible_values(*c.left, unbindable);
            return {in.f, in.t, in.e};
        }
        case ConstraintKind::And: {
            ValueSet l = possible_values(*c.left, unbindable);
            ValueSet r = possible_values(*c.right, unbindable);
            ValueSet out;
            out.f = l.f || r.f;
            out.t = l.t && r.t;
            out.e = (l.e && (r.e || r.t)) || (r.e && (l.e || l.t));
            return out;
        }
        case ConstraintKind::Or: {
            ValueSet l = possible_values(*c.left, unbindable);
            ValueSet r = possible_values(*c.right, unbindable);
            ValueSet out;
            out.t = l.t || r.t;
            out.f = l.f && r.f;
            out.e = (l.e && (r.e || r.f)) || (r.e && (l.e || l.f));
            return out;
        }
    }
    return {true, true, true};
}

// Root-level filters whose condition can never be True because it requires
// variables the pattern can never bind.
bool strict_safety_unsatisfiable(const Pattern& body) {
    const Pattern* p = &body;
    while (p->kind == PatternKind::Filter) {
        auto pv = pattern_vars(*p->left);
        std::set<std::string> unbindable;
        for (const auto& v : constraint_vars(*p->condition))
            if (!pv.count(v)) unbindable.insert(v);
        if (!unbindable.empty()) {
            ValueSet vs = possible_values(*p->condition, unbindable);
            if (!vs.t) return true;
        }
        p = p->left.get();
    }
    return false;
}

const Pattern* opt_chain_head(const Pattern& body) {
    const Pattern* p = &body;
    if (p->kind != PatternKind::Opt) return nullptr;
    while (p->kind == PatternKind::Opt) p = p->left.get();
    return p;
}

SatVerdict run_closure_pipeline(const std::vector<const Pattern*>& wd_branches,
                                const SatOptions& opts) {
    // Step 5/6: OPT-core, strong UNF, then the closure test over all
    // branches as one union.
    std::vector<PatternPtr> af_branches;
    for (const Pattern* b : wd_branches) {
        PatternPtr core = opt_core(*b);
        PatternPtr strong = to_strong_unf(*core);
        for (const Pattern* q : unf_branches(*strong)) af_branches.push_back(q->clone());
    }
    PatternPtr combined = std::move(af_branches.back());
    af_branches.pop_back();
    while (!af_branches.empty()) {
        combined = Pattern::disj(std::move(af_branches.back()), std::move(combined));
        af_branches.pop_back();
    }
    return algorithm1(*combined, opts);
}

}  // namespace

SatVerdict check_satisfiability_pattern(const Pattern& body, const RdfDataset* reference,
                                        const SatOptions& opts) {
    SatVerdict verdict;

    // Step 1: a nonempty evaluation over a reference dataset settles it.
    if (reference) {
        if (!eval_pattern(body, *reference).empty()) {
            verdict.status = SatStatus::Satisfiable;
            verdict.rule = SatRule::DatasetWitness;
            verdict.witness = *reference;
            return verdict;
        }
    }

    // Step 2: filter-free patterns are satisfiable.
    if (!contains_filter(body)) {
        verdict.status = SatStatus::Satisfiable;
        verdict.rule = SatRule::FilterFree;
        return verdict;
    }

    // Step 3: negated bound() goes to the pool, or to the oracle.
    if (pattern_has_negated_bound(body)) {
        if (opts.use_oracle) {
            SatSearchResult r = brute_force_satisfiable(body, opts.budget);
            if (r.status == SearchStatus::Found) {
                verdict.status = SatStatus::Satisfiable;
                verdict.rule = SatRule::DatasetWitness;
                verdict.witness = std::move(r.witness);
                return verdict;
            }
        }
        verdict.status = SatStatus::Pooled;
        verdict.rule = SatRule::NegatedBoundPool;
        return verdict;
    }

    // Step 4: well-designed directly or after the UNF rewrite.
    std::vector<const Pattern*> wd_branches;
    PatternPtr rewritten;
    if (is_well_designed_pattern(body).well_designed()) {
        wd_branches = unf_branches(body);
    } else {
        UnfResult unf = to_unf(body);
        if (unf.rewritable && !unf.exceeded_limit &&
            is_well_designed_pattern(*unf.pattern).well_designed()) {
            rewritten = std::move(unf.pattern);
            wd_branches = unf_branches(*rewritten);
        }
    }
    if (!wd_branches.empty()) {
        return run_closure_pipeline(wd_branches, opts);
    }

    // Not well-designed: the pool, optionally resolved by the documented
    // heuristics.
    if (opts.pool_heuristics) {
        if (strict_safety_unsatisfiable(body)) {
            verdict.status = SatStatus::Unsatisfiable;
            verdict.rule = SatRule::StrictSafetyRule;
            return verdict;
        }
        if (const Pattern* head = opt_chain_head(body)) {
            SatVerdict inner = check_satisfiability_pattern(*head, reference, opts);
            inner.rule = SatRule::HeuristicP1;
            return inner;
        }
    }
    verdict.status = SatStatus::Pooled;
    verdict.rule = SatRule::NonWdPool;
    return verdict;
}

SatVerdict check_satisfiability(const Query& q, const RdfDataset* reference,
                                const SatOptions& opts) {
    return check_satisfiability_pattern(*q.body, reference, opts);
}

}  // namespace sparqlstat
