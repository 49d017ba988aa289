#include "sparqlstat/monotonicity.hpp"

#include <vector>

namespace sparqlstat {

const char* to_string(MonoClass c) {
    switch (c) {
        case MonoClass::Monotonic: return "Monotonic";
        case MonoClass::WeaklyMonotonic: return "WeaklyMonotonic";
        case MonoClass::NonMonotonic: return "NonMonotonic";
        case MonoClass::Unknown: return "Unknown";
    }
    return "";
}

const char* to_string(MonoRule r) {
    switch (r) {
        case MonoRule::OptFree: return "OptFree";
        case MonoRule::OptMonotonic: return "OptMonotonic";
        case MonoRule::AllBranchesWellDesigned: return "AllBranchesWellDesigned";
        case MonoRule::ExceptionTemplate: return "ExceptionTemplate";
        case MonoRule::OracleCounterexample: return "OracleCounterexample";
        case MonoRule::UnsafeDefault: return "UnsafeDefault";
        case MonoRule::None: return "None";
    }
    return "";
}

const char* to_string(TemplateId t) {
    switch (t) {
        case TemplateId::T1_OptOverUnion: return "T1";
        case TemplateId::T2_OptOverUnionReuse: return "T2";
        case TemplateId::T3_LangMatchesFilter: return "T3";
        case TemplateId::T4_NegatedBoundFilter: return "T4";
        case TemplateId::T5_NestedOptReuse: return "T5";
    }
    return "";
}

PatternPtr strip_graph(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::GraphIri:
        case PatternKind::GraphVar:
            return strip_graph(*p.left);
        case PatternKind::Triple:
        case PatternKind::Empty:
            return p.clone();
        case PatternKind::And:
            return Pattern::conj(strip_graph(*p.left), strip_graph(*p.right));
        case PatternKind::Union:
            return Pattern::disj(strip_graph(*p.left), strip_graph(*p.right));
        case PatternKind::Opt:
            return Pattern::opt(strip_graph(*p.left), strip_graph(*p.right));
        case PatternKind::Filter:
            return Pattern::filter(strip_graph(*p.left), p.condition->clone());
    }
    return nullptr;
}

namespace {

// Variables bound only optionally somewhere inside p: v occurs in the right
// side of an OPT but not in its left side.
std::set<std::string> optionally_introduced(const Pattern& p) {
    std::set<std::string> out;
    if (p.kind == PatternKind::Opt) {
        auto lv = occurrence_vars(*p.left);
        for (const auto& v : occurrence_vars(*p.right))
            if (!lv.count(v)) out.insert(v);
    }
    if (p.left) {
        auto l = optionally_introduced(*p.left);
        out.insert(l.begin(), l.end());
    }
    if (p.right) {
        auto r = optionally_introduced(*p.right);
        out.insert(r.begin(), r.end());
    }
    return out;
}

bool opt_and_union_free(const Pattern& p) {
    return !contains_opt(p) && !contains_union(p);
}

// Atoms of the NNF with the given polarity applied.
void collect_nnf_atoms(const Constraint& c, bool flip, std::vector<AtomicConstraint>& out) {
    switch (c.kind) {
        case ConstraintKind::Atomic: {
            AtomicConstraint a = c.atom;
            if (flip) a.negated = !a.negated;
            out.push_back(std::move(a));
            return;
        }
        case ConstraintKind::Not:
            collect_nnf_atoms(*c.left, !flip, out);
            return;
        default:
            if (c.left) collect_nnf_atoms(*c.left, flip, out);
            if (c.right) collect_nnf_atoms(*c.right, flip, out);
    }
}

bool t2_matches(const Pattern& p) {
    if (p.kind != PatternKind::Opt || p.right->kind != PatternKind::Union) return false;
    auto introduced = optionally_introduced(*p.left);
    if (introduced.empty()) return false;
    for (const Pattern* branch : unf_branches(*p.right)) {
        for (const auto& v : occurrence_vars(*branch))
            if (introduced.count(v)) return true;
    }
    return false;
}

bool t1_matches(const Pattern& p) {
    if (p.kind != PatternKind::Opt || p.right->kind != PatternKind::Union) return false;
    if (!opt_and_union_free(*p.left)) return false;
    for (const Pattern* branch : unf_branches(*p.right))
        if (!opt_and_union_free(*branch)) return false;
    return true;
}

bool t3_matches(const Pattern& p) {
    if (p.kind != PatternKind::Filter) return false;
    const Constraint& c = *p.condition;
    if (c.kind != ConstraintKind::Atomic || c.atom.kind != AtomKind::LangMatches ||
        c.atom.negated)
        return false;
    const Pattern& child = *p.left;
    if (child.kind != PatternKind::Opt) return false;
    if (!opt_and_union_free(*child.left) || !opt_and_union_free(*child.right)) return false;
    auto lv = occurrence_vars(*child.left);
    auto rv = occurrence_vars(*child.right);
    return rv.count(c.atom.var) && !lv.count(c.atom.var);
}

bool t4_matches(const Pattern& p) {
    if (p.kind != PatternKind::Filter) return false;
    std::vector<AtomicConstraint> atoms;
    collect_nnf_atoms(*p.condition, false, atoms);
    auto introduced = optionally_introduced(*p.left);
    for (const auto& a : atoms) {
        if (a.kind == AtomKind::Bound && a.negated && introduced.count(a.var)) return true;
    }
    return false;
}

bool t5_matches(const Pattern& p) {
    if (p.kind == PatternKind::Opt) {
        auto introduced = optionally_introduced(*p.left);
        if (!introduced.empty()) {
            for (const auto& v : occurrence_vars(*p.right))
                if (introduced.count(v)) return true;
        }
    }
    if (p.left && t5_matches(*p.left)) return true;
    if (p.right && t5_matches(*p.right)) return true;
    return false;
}

// Branch well-designedness in the sense used by the monotonicity procedure:
// GRAPH is gone by stripping, and built-in vs non-built-in makes no
// difference here, so only safety and the OPT variable condition remain.
bool branch_wd_for_monotonicity(const Pattern& branch) {
    if (!is_safe(branch).safe) return false;
    PatternPtr scrubbed = branch.clone();
    // reuse the step-3 check through the public entry point by removing the
    // step-1 disqualifiers: opaque atoms only affect GraphOrNonBuiltin
    WdVerdict v = is_well_designed_pattern(*scrubbed);
    if (v.well_designed()) return true;
    if (v.reason != WdReason::GraphOrNonBuiltin) return false;
    // non-built-in condition: re-run the variable condition manually by
    // masking opaque atoms as bound() atoms over the same variables
    struct Masker {
        static ConstraintPtr mask(const Constraint& c) {
            switch (c.kind) {
                case ConstraintKind::Atomic: {
                    if (c.atom.kind != AtomKind::Opaque) return Constraint::atomic(c.atom);
                    ConstraintPtr folded;
                    for (const auto& v : c.atom.variables()) {
                        AtomicConstraint b;
                        b.kind = AtomKind::Bound;
                        b.var = v;
                        auto atom = Constraint::atomic(std::move(b));
                        folded = folded ? Constraint::conj(std::move(folded), std::move(atom))
                                        : std::move(atom);
                    }
                    if (!folded) {
                        AtomicConstraint b;
                        b.kind = AtomKind::Bound;
                        b.var = "_opaque";
                        folded = Constraint::atomic(std::move(b));
                    }
                    return folded;
                }
                case ConstraintKind::And:
                    return Constraint::conj(mask(*c.left), mask(*c.right));
                case ConstraintKind::Or:
                    return Constraint::disj(mask(*c.left), mask(*c.right));
                case ConstraintKind::Not:
                    return Constraint::negate(mask(*c.left));
            }
            return nullptr;
        }
        static PatternPtr mask_pattern(const Pattern& p) {
            switch (p.kind) {
                case PatternKind::Filter:
                    return Pattern::filter(mask_pattern(*p.left), mask(*p.condition));
                case PatternKind::Triple:
                case PatternKind::Empty:
                    return p.clone();
                case PatternKind::And:
                    return Pattern::conj(mask_pattern(*p.left), mask_pattern(*p.right));
                case PatternKind::Union:
                    return Pattern::disj(mask_pattern(*p.left), mask_pattern(*p.right));
                case PatternKind::Opt:
                    return Pattern::opt(mask_pattern(*p.left), mask_pattern(*p.right));
                case PatternKind::GraphIri:
                    return Pattern::graph_iri(p.graph, mask_pattern(*p.left));
                case PatternKind::GraphVar:
                    return Pattern::graph_var(p.graph, mask_pattern(*p.left));
            }
            return nullptr;
        }
    };
    return is_well_designed_pattern(*Masker::mask_pattern(branch)).well_designed();
}

}  // namespace

std::optional<TemplateId> match_exception_template(const Pattern& p) {
    if (t2_matches(p)) return TemplateId::T2_OptOverUnionReuse;
    if (t1_matches(p)) return TemplateId::T1_OptOverUnion;
    if (t3_matches(p)) return TemplateId::T3_LangMatchesFilter;
    if (t4_matches(p)) return TemplateId::T4_NegatedBoundFilter;
    if (t5_matches(p)) return TemplateId::T5_NestedOptReuse;
    return std::nullopt;
}

MonotonicityVerdict classify_monotonicity_pattern(const Pattern& body,
                                                  const MonoOptions& opts) {
    MonotonicityVerdict out;
    PatternPtr core = strip_graph(body);

    auto attach_plain_evidence = [&](MonotonicityVerdict& v) {
        if (!opts.use_oracle) return;
        MonoSearchResult plain =
            search_monotonicity_counterexample(*core, MonoMode::Plain, opts.budget);
        if (plain.status == SearchStatus::Found)
            v.plain_evidence = std::move(plain.counterexample);
    };

    // Step A: OPT-free patterns are monotonic; filters only shrink solution
    // sets pointwise, so they cannot break this.
    if (!contains_opt(*core)) {
        out.cls = MonoClass::Monotonic;
        out.rule = MonoRule::OptFree;
        return out;
    }

    // Step B: rewrite to UNF and classify the union-free branches.
    UnfResult unf = to_unf(*core);
    if (unf.rewritable && !unf.exceeded_limit) {
        auto branches = unf.branches();
        bool all_mono = true;
        for (const Pattern* b : branches) {
            if (!contains_opt(*b)) continue;
            if (!is_opt_monotonic(*b)) {
                all_mono = false;
                break;
            }
        }
        if (all_mono) {
            out.cls = MonoClass::Monotonic;
            out.rule = MonoRule::OptMonotonic;
            return out;
        }
        bool all_wd = true;
        for (const Pattern* b : branches) {
            if (!branch_wd_for_monotonicity(*b)) {
                all_wd = false;
                break;
            }
        }
        if (all_wd) {
            out.cls = MonoClass::WeaklyMonotonic;
            out.rule = MonoRule::AllBranchesWellDesigned;
            attach_plain_evidence(out);
            return out;
        }
    }

    // Step C: exception templates.
    if (auto tid = match_exception_template(*core)) {
        out.template_id = tid;
        out.rule = MonoRule::ExceptionTemplate;
        switch (*tid) {
            case TemplateId::T1_OptOverUnion:
                out.cls = MonoClass::WeaklyMonotonic;
                attach_plain_evidence(out);
                return out;
            case TemplateId::T3_LangMatchesFilter:
                out.cls = MonoClass::Monotonic;
                return out;
            case TemplateId::T2_OptOverUnionReuse:
            case TemplateId::T4_NegatedBoundFilter:
            case TemplateId::T5_NestedOptReuse: {
                MonoSearchResult weak =
                    search_monotonicity_counterexample(*core, MonoMode::Weak, opts.budget);
                if (weak.status == SearchStatus::Found) {
                    out.cls = MonoClass::NonMonotonic;
                    out.evidence = std::move(weak.counterexample);
                    return out;
                }
                // no template verdict without replayable evidence
                out.cls = MonoClass::Unknown;
                out.rule = MonoRule::None;
                out.template_id.reset();
                break;
            }
        }
    }

    // Step D: bounded oracle, then the unsafe default.
    if (opts.use_oracle) {
        MonoSearchResult weak =
            search_monotonicity_counterexample(*core, MonoMode::Weak, opts.budget);
        if (weak.status == SearchStatus::Found) {
            out.cls = MonoClass::NonMonotonic;
            out.rule = MonoRule::OracleCounterexample;
            out.evidence = std::move(weak.counterexample);
            return out;
        }
    }
    if (!is_safe(*core).safe) {
        out.cls = MonoClass::Monotonic;
        out.rule = MonoRule::UnsafeDefault;
        return out;
    }
    out.cls = MonoClass::Unknown;
    out.rule = MonoRule::None;
    return out;
}

MonotonicityVerdict classify_monotonicity(const Query& q, const MonoOptions& opts) {
    return classify_monotonicity_pattern(*q.body, opts);
}

}  // namespace sparqlstat
