#include "sparqlstat/normal_forms.hpp"

#include <algorithm>
#include <map>

namespace sparqlstat {

const char* to_string(WdStatus s) {
    return s == WdStatus::WellDesigned ? "WellDesigned" : "NotWellDesigned";
}

const char* to_string(WdReason r) {
    switch (r) {
        case WdReason::GraphOrNonBuiltin: return "GraphOrNonBuiltin";
        case WdReason::NotUnf: return "NotUnf";
        case WdReason::UnionBranchFails: return "UnionBranchFails";
        case WdReason::UnsafeFilter: return "UnsafeFilter";
        case WdReason::OptConditionViolated: return "OptConditionViolated";
        case WdReason::AllBranchesWd: return "AllBranchesWd";
        case WdReason::UnionFreeWd: return "UnionFreeWd";
    }
    return "";
}

// --- safety -------------------------------------------------------------------

namespace {

bool safety_rec(const Pattern& p, PatternPath& path, SafetyResult& out) {
    if (p.kind == PatternKind::Filter) {
        auto pv = pattern_vars(*p.left);
        for (const auto& v : constraint_vars(*p.condition)) {
            if (!pv.count(v)) {
                out.safe = false;
                out.violating_filter = path;
                out.variable = v;
                return false;
            }
        }
    }
    if (p.left) {
        path.push_back(0);
        if (!safety_rec(*p.left, path, out)) return false;
        path.pop_back();
    }
    if (p.right) {
        path.push_back(1);
        if (!safety_rec(*p.right, path, out)) return false;
        path.pop_back();
    }
    return true;
}

}  // namespace

SafetyResult is_safe(const Pattern& p) {
    SafetyResult out;
    PatternPath path;
    safety_rec(p, path, out);
    return out;
}

// --- UNF ----------------------------------------------------------------------

bool is_union_free(const Pattern& p) { return !contains_union(p); }

bool is_unf(const Pattern& p) {
    if (p.kind == PatternKind::Union) return is_unf(*p.left) && is_unf(*p.right);
    return is_union_free(p);
}

std::vector<const Pattern*> unf_branches(const Pattern& p) {
    std::vector<const Pattern*> out;
    if (p.kind == PatternKind::Union) {
        auto l = unf_branches(*p.left);
        auto r = unf_branches(*p.right);
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), r.begin(), r.end());
    } else {
        out.push_back(&p);
    }
    return out;
}

namespace {

struct BranchSet {
    std::vector<PatternPtr> branches;
    bool blocked = false;
    bool exceeded = false;
    PatternPath blocking;
};

void unf_rec(const Pattern& p, PatternPath& path, std::size_t max_branches, BranchSet& out) {
    switch (p.kind) {
        case PatternKind::Triple:
        case PatternKind::Empty:
            out.branches.push_back(p.clone());
            return;
        case PatternKind::Union: {
            path.push_back(0);
            unf_rec(*p.left, path, max_branches, out);
            path.pop_back();
            if (out.blocked || out.exceeded) return;
            path.push_back(1);
            unf_rec(*p.right, path, max_branches, out);
            path.pop_back();
            return;
        }
        case PatternKind::And: {
            BranchSet l, r;
            path.push_back(0);
            unf_rec(*p.left, path, max_branches, l);
            path.pop_back();
            if (l.blocked || l.exceeded) {
                out = std::move(l);
                return;
            }
            path.push_back(1);
            unf_rec(*p.right, path, max_branches, r);
            path.pop_back();
            if (r.blocked || r.exceeded) {
                out = std::move(r);
                return;
            }
            if (l.branches.size() * r.branches.size() > max_branches) {
                out.exceeded = true;
                return;
            }
            for (const auto& a : l.branches) {
                for (const auto& b : r.branches) {
                    out.branches.push_back(Pattern::conj(a->clone(), b->clone()));
                }
            }
            return;
        }
        case PatternKind::Opt: {
            BranchSet l, r;
            path.push_back(0);
            unf_rec(*p.left, path, max_branches, l);
            path.pop_back();
            if (l.blocked || l.exceeded) {
                out = std::move(l);
                return;
            }
            path.push_back(1);
            unf_rec(*p.right, path, max_branches, r);
            path.pop_back();
            if (r.blocked || r.exceeded) {
                out = std::move(r);
                return;
            }
            if (r.branches.size() != 1) {
                // the distributive law over the right side of OPT is disabled
                out.blocked = true;
                out.blocking = path;
                return;
            }
            for (const auto& a : l.branches) {
                out.branches.push_back(Pattern::opt(a->clone(), r.branches[0]->clone()));
            }
            return;
        }
        case PatternKind::Filter: {
            BranchSet l;
            path.push_back(0);
            unf_rec(*p.left, path, max_branches, l);
            path.pop_back();
            if (l.blocked || l.exceeded) {
                out = std::move(l);
                return;
            }
            for (const auto& a : l.branches) {
                out.branches.push_back(Pattern::filter(a->clone(), p.condition->clone()));
            }
            return;
        }
        case PatternKind::GraphIri:
        case PatternKind::GraphVar: {
            BranchSet l;
            path.push_back(0);
            unf_rec(*p.left, path, max_branches, l);
            path.pop_back();
            if (l.blocked || l.exceeded) {
                out = std::move(l);
                return;
            }
            for (const auto& a : l.branches) {
                out.branches.push_back(p.kind == PatternKind::GraphIri
                                           ? Pattern::graph_iri(p.graph, a->clone())
                                           : Pattern::graph_var(p.graph, a->clone()));
            }
            return;
        }
    }
}

PatternPtr fold_union(std::vector<PatternPtr> branches) {
    PatternPtr out = std::move(branches.back());
    for (auto it = branches.rbegin() + 1; it != branches.rend(); ++it) {
        out = Pattern::disj(std::move(*it), std::move(out));
    }
    return out;
}

}  // namespace

UnfResult to_unf(const Pattern& p, std::size_t max_branches) {
    UnfResult res;
    if (is_unf(p)) {
        res.pattern = p.clone();
        res.rewritable = true;
        return res;
    }
    BranchSet bs;
    PatternPath path;
    unf_rec(p, path, max_branches, bs);
    if (bs.exceeded || bs.branches.size() > max_branches) {
        res.exceeded_limit = true;
        return res;
    }
    if (bs.blocked) {
        res.blocking_opt = bs.blocking;
        return res;
    }
    res.pattern = fold_union(std::move(bs.branches));
    res.rewritable = true;
    return res;
}

// --- well-designedness -----------------------------------------------------------

namespace {

void occurrence_counts(const Pattern& p, std::map<std::string, int>& out) {
    switch (p.kind) {
        case PatternKind::Triple:
            for (const Term* t : {&p.triple.subject, &p.triple.predicate, &p.triple.object})
                if (t->is_variable()) ++out[t->lexical];
            return;
        case PatternKind::GraphVar:
            ++out[p.graph.lexical];
            break;
        case PatternKind::Filter:
            for (const auto& v : constraint_vars(*p.condition)) ++out[v];
            break;
        default:
            break;
    }
    if (p.left) occurrence_counts(*p.left, out);
    if (p.right) occurrence_counts(*p.right, out);
}

struct OptCheck {
    bool ok = true;
    PatternPath opt_path;
    std::string variable;
};

// The variable condition of well-designedness: for Opt subpattern P' =
// (P1 OPT P2), any variable occurring in P2 and outside P' occurs in P1.
// Occurrences include filter constraints throughout.
void check_opt_condition(const Pattern& p, PatternPath& path,
                         const std::map<std::string, int>& totals, OptCheck& out) {
    if (!out.ok) return;
    if (p.kind == PatternKind::Opt) {
        std::map<std::string, int> in_sub;
        occurrence_counts(p, in_sub);
        auto left_vars = occurrence_vars(*p.left);
        for (const auto& v : occurrence_vars(*p.right)) {
            auto total = totals.find(v);
            int outside = (total == totals.end() ? 0 : total->second) - in_sub[v];
            if (outside > 0 && !left_vars.count(v)) {
                out.ok = false;
                out.opt_path = path;
                out.variable = v;
                return;
            }
        }
    }
    if (p.left) {
        path.push_back(0);
        check_opt_condition(*p.left, path, totals, out);
        path.pop_back();
    }
    if (p.right) {
        path.push_back(1);
        check_opt_condition(*p.right, path, totals, out);
        path.pop_back();
    }
}

// Step 3 of the procedure, on a union-free pattern embedded in `root` at
// `base` (occurrences outside the branch count against the condition).
WdVerdict union_free_wd(const Pattern& root, const Pattern& branch, const PatternPath& base,
                        WdReason positive_reason) {
    SafetyResult s = is_safe(branch);
    if (!s.safe) {
        WdVerdict v;
        v.status = WdStatus::NotWellDesigned;
        v.reason = WdReason::UnsafeFilter;
        PatternPath full = base;
        full.insert(full.end(), s.violating_filter.begin(), s.violating_filter.end());
        v.witness = WdWitness{std::move(full), s.variable};
        return v;
    }
    std::map<std::string, int> totals;
    occurrence_counts(root, totals);
    OptCheck oc;
    PatternPath path = base;
    check_opt_condition(branch, path, totals, oc);
    if (!oc.ok) {
        WdVerdict v;
        v.status = WdStatus::NotWellDesigned;
        v.reason = WdReason::OptConditionViolated;
        v.witness = WdWitness{oc.opt_path, oc.variable};
        return v;
    }
    WdVerdict v;
    v.status = WdStatus::WellDesigned;
    v.reason = positive_reason;
    return v;
}

}  // namespace

WdVerdict is_well_designed_pattern(const Pattern& p) {
    WdVerdict v;
    // Step 1: GRAPH or non-built-in conditions disqualify outright.
    if (contains_graph(p) || !pattern_built_in_only(p)) {
        v.status = WdStatus::NotWellDesigned;
        v.reason = WdReason::GraphOrNonBuiltin;
        return v;
    }
    if (!is_unf(p)) {
        v.status = WdStatus::NotWellDesigned;
        v.reason = WdReason::NotUnf;
        return v;
    }
    if (is_union_free(p)) {
        // Step 3
        return union_free_wd(p, p, {}, WdReason::UnionFreeWd);
    }
    // Step 2: every union-free branch must be well-designed on its own.
    // In a UNF pattern a union never sits below an OPT, so occurrences in
    // sibling branches cannot interact with a branch-internal condition.
    std::vector<std::pair<const Pattern*, PatternPath>> branches;
    std::vector<std::pair<const Pattern*, PatternPath>> stack{{&p, PatternPath{}}};
    while (!stack.empty()) {
        auto [cur, cur_path] = stack.back();
        stack.pop_back();
        if (cur->kind == PatternKind::Union) {
            PatternPath lp = cur_path;
            lp.push_back(0);
            PatternPath rp = cur_path;
            rp.push_back(1);
            stack.push_back({cur->left.get(), lp});
            stack.push_back({cur->right.get(), rp});
        } else {
            branches.push_back({cur, cur_path});
        }
    }
    std::reverse(branches.begin(), branches.end());
    for (const auto& [branch, bpath] : branches) {
        WdVerdict bv = union_free_wd(*branch, *branch, bpath, WdReason::UnionFreeWd);
        if (!bv.well_designed()) {
            v.status = WdStatus::NotWellDesigned;
            v.reason = WdReason::UnionBranchFails;
            v.witness = bv.witness;
            return v;
        }
    }
    v.status = WdStatus::WellDesigned;
    v.reason = WdReason::AllBranchesWd;
    return v;
}

WdVerdict is_well_designed(const Query& q) { return is_well_designed_pattern(*q.body); }

// --- OPT analyses ------------------------------------------------------------------

namespace {

bool opt_monotonic_rec(const Pattern& p) {
    if (p.kind == PatternKind::Opt) {
        auto rv = occurrence_vars(*p.right);
        auto lv = occurrence_vars(*p.left);
        for (const auto& v : rv)
            if (!lv.count(v)) return false;
    }
    if (p.left && !opt_monotonic_rec(*p.left)) return false;
    if (p.right && !opt_monotonic_rec(*p.right)) return false;
    return true;
}

PatternPtr opt_core_rec(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Opt:
            return opt_core_rec(*p.left);
        case PatternKind::Triple:
        case PatternKind::Empty:
            return p.clone();
        case PatternKind::And:
            return Pattern::conj(opt_core_rec(*p.left), opt_core_rec(*p.right));
        case PatternKind::Union:
            return Pattern::disj(opt_core_rec(*p.left), opt_core_rec(*p.right));
        case PatternKind::Filter:
            return Pattern::filter(opt_core_rec(*p.left), p.condition->clone());
        case PatternKind::GraphIri:
            return Pattern::graph_iri(p.graph, opt_core_rec(*p.left));
        case PatternKind::GraphVar:
            return Pattern::graph_var(p.graph, opt_core_rec(*p.left));
    }
    return nullptr;
}

}  // namespace

bool is_opt_monotonic(const Pattern& p) {
    if (!is_union_free(p)) throw NotUnionFree("is_opt_monotonic requires a UNION-free pattern");
    return opt_monotonic_rec(p);
}

PatternPtr opt_core(const Pattern& p) {
    if (!is_union_free(p))
        throw PreconditionViolated("opt_core requires a UNION-free pattern");
    if (!is_well_designed_pattern(p).well_designed())
        throw PreconditionViolated("opt_core requires a well-designed pattern");
    return opt_core_rec(p);
}

PatternPtr opt_core_unchecked(const Pattern& p) { return opt_core_rec(p); }

// --- strong UNF ----------------------------------------------------------------------

bool is_af_pattern(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Triple:
        case PatternKind::Empty:
            return true;
        case PatternKind::And:
            return is_af_pattern(*p.left) && is_af_pattern(*p.right);
        case PatternKind::Filter:
            return is_af_pattern(*p.left);
        default:
            return false;
    }
}

namespace {

bool filters_atomic(const Pattern& p) {
    if (p.kind == PatternKind::Filter && p.condition->kind != ConstraintKind::Atomic)
        return false;
    if (p.left && !filters_atomic(*p.left)) return false;
    if (p.right && !filters_atomic(*p.right)) return false;
    return true;
}

// Filter splitting against an NNF constraint:
//   P FILTER (C1 ∧ C2) ≡ (P FILTER C1) FILTER C2
//   P FILTER (C1 ∨ C2) ≡ (P FILTER C1) UNION (P FILTER C2)
PatternPtr split_filter(PatternPtr p, const Constraint& c) {
    switch (c.kind) {
        case ConstraintKind::Atomic:
            return Pattern::filter(std::move(p), c.clone());
        case ConstraintKind::And: {
            PatternPtr first = split_filter(std::move(p), *c.left);
            return split_filter(std::move(first), *c.right);
        }
        case ConstraintKind::Or: {
            PatternPtr copy = p->clone();
            return Pattern::disj(split_filter(std::move(p), *c.left),
                                 split_filter(std::move(copy), *c.right));
        }
        case ConstraintKind::Not:
            // NNF leaves no Not nodes
            break;
    }
    throw PreconditionViolated("constraint not in negation normal form");
}

PatternPtr expand_filters(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Triple:
        case PatternKind::Empty:
            return p.clone();
        case PatternKind::And:
            return Pattern::conj(expand_filters(*p.left), expand_filters(*p.right));
        case PatternKind::Union:
            return Pattern::disj(expand_filters(*p.left), expand_filters(*p.right));
        case PatternKind::Filter: {
            PatternPtr child = expand_filters(*p.left);
            ConstraintPtr nnf = p.condition->to_nnf();
            return split_filter(std::move(child), *nnf);
        }
        default:
            throw PreconditionViolated("to_strong_unf requires an OPT-free, GRAPH-free pattern");
    }
}

}  // namespace

bool is_strong_unf(const Pattern& p) {
    if (!is_unf(p)) return false;
    for (const Pattern* b : unf_branches(p)) {
        if (!is_af_pattern(*b) || !filters_atomic(*b)) return false;
    }
    return true;
}

PatternPtr to_strong_unf(const Pattern& p) {
    if (contains_opt(p) || contains_graph(p))
        throw PreconditionViolated("to_strong_unf requires an OPT-free, GRAPH-free pattern");
    PatternPtr expanded = expand_filters(p);
    UnfResult unf = to_unf(*expanded, 1u << 20);
    if (!unf.rewritable)
        throw PreconditionViolated("filter expansion exceeded the distribution limit");
    return std::move(unf.pattern);
}

bool pattern_built_in_only(const Pattern& p) {
    if (p.kind == PatternKind::Filter && !p.condition->built_in_only()) return false;
    if (p.left && !pattern_built_in_only(*p.left)) return false;
    if (p.right && !pattern_built_in_only(*p.right)) return false;
    return true;
}

}  // namespace sparqlstat
