#include "sparqlstat/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "eval_core.hpp"

namespace sparqlstat {

namespace {

using detail::CompiledPattern;
using detail::IDataset;
using detail::IGraph;
using detail::IMappingSet;
using detail::ITriple;
using detail::TermPool;

// position domains for variables
enum : unsigned { kSubj = 1, kPred = 2, kObj = 4, kGraphName = 8 };

void collect_var_positions(const Pattern& p, std::map<std::string, unsigned>& out) {
    switch (p.kind) {
        case PatternKind::Triple: {
            if (p.triple.subject.is_variable()) out[p.triple.subject.lexical] |= kSubj;
            if (p.triple.predicate.is_variable()) out[p.triple.predicate.lexical] |= kPred;
            if (p.triple.object.is_variable()) out[p.triple.object.lexical] |= kObj;
            return;
        }
        case PatternKind::GraphVar:
            out[p.graph.lexical] |= kGraphName;
            break;
        default:
            break;
    }
    if (p.left) collect_var_positions(*p.left, out);
    if (p.right) collect_var_positions(*p.right, out);
}

bool term_fits(const Term& t, unsigned positions) {
    if ((positions & kSubj) && !(t.is_iri() || t.is_blank())) return false;
    if ((positions & (kPred | kGraphName)) && !t.is_iri()) return false;
    return true;
}

std::string unused_name(const std::set<std::string>& taken, const std::string& stem) {
    std::string name = stem;
    int i = 0;
    while (taken.count(name)) name = stem + std::to_string(i++);
    return name;
}

struct AtomScan {
    bool safe_vocabulary = true;  // bound/equality/type atoms only
    bool has_eqvar = false;
    std::vector<Term> order_constants;
    std::vector<std::string> lang_ranges;
};

void scan_atom(const AtomicConstraint& a, AtomScan& out) {
    switch (a.kind) {
        case AtomKind::Bound:
        case AtomKind::EqConst:
        case AtomKind::IsIri:
        case AtomKind::IsBlank:
        case AtomKind::IsLiteral:
            break;
        case AtomKind::EqVar:
            out.has_eqvar = true;
            break;
        case AtomKind::LtConst:
        case AtomKind::LeqConst:
        case AtomKind::GtConst:
        case AtomKind::GeqConst:
            out.safe_vocabulary = false;
            if (a.constant.is_numeric()) out.order_constants.push_back(a.constant);
            break;
        case AtomKind::LangEqConst:
        case AtomKind::LangMatches:
            out.safe_vocabulary = false;
            out.lang_ranges.push_back(a.text);
            break;
        default:
            out.safe_vocabulary = false;
            break;
    }
}

void scan_constraints(const Constraint& c, AtomScan& out) {
    if (c.kind == ConstraintKind::Atomic) {
        scan_atom(c.atom, out);
        return;
    }
    if (c.left) scan_constraints(*c.left, out);
    if (c.right) scan_constraints(*c.right, out);
}

void scan_pattern(const Pattern& p, AtomScan& out) {
    if (p.kind == PatternKind::Filter) scan_constraints(*p.condition, out);
    if (p.left) scan_pattern(*p.left, out);
    if (p.right) scan_pattern(*p.right, out);
}

std::optional<std::string> decimal_shift(const std::string& canonical, int delta) {
    char* end = nullptr;
    long double v = std::strtold(canonical.c_str(), &end);
    if (end == canonical.c_str()) return std::nullopt;
    v += delta;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6Lf", v);
    return canonical_decimal(buf);
}

Term numeric_literal(const std::string& canonical) {
    bool integral = canonical.find('.') == std::string::npos;
    return Term::literal(canonical, "",
                         integral ? "http://www.w3.org/2001/XMLSchema#integer"
                                  : "http://www.w3.org/2001/XMLSchema#decimal");
}

// Fresh constants distinct from everything the pattern mentions.
struct Universe {
    std::vector<Term> terms;

    void add_unique(const Term& t) {
        if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
    }
};

Universe build_universe(const Pattern& p, bool for_satisfiability, const AtomScan& scan) {
    Universe u;
    for (const Term& c : pattern_constants(p)) u.add_unique(c);
    std::set<std::string> iri_names, literal_names;
    for (const Term& t : u.terms) {
        if (t.is_iri()) iri_names.insert(t.lexical);
        if (t.is_literal()) literal_names.insert(t.lexical);
    }
    u.add_unique(Term::iri(unused_name(iri_names, "urn:fresh:i")));
    u.add_unique(Term::literal(unused_name(literal_names, "fresh.l")));
    std::string fresh_num = "1009";
    while (literal_names.count(fresh_num)) fresh_num += "9";
    u.add_unique(numeric_literal(fresh_num));
    if (for_satisfiability) {
        u.add_unique(Term::blank("fresh"));
        if (scan.has_eqvar) {
            u.add_unique(Term::iri(unused_name(iri_names, "urn:fresh:j")));
            u.add_unique(Term::literal(unused_name(literal_names, "fresh.m")));
        }
        for (const Term& c : scan.order_constants) {
            if (auto lo = decimal_shift(c.lexical, -1)) u.add_unique(numeric_literal(*lo));
            if (auto hi = decimal_shift(c.lexical, +1)) u.add_unique(numeric_literal(*hi));
        }
        for (const std::string& range : scan.lang_ranges) {
            u.add_unique(Term::literal("fresh", range == "*" ? "en" : range));
        }
    }
    return u;
}

// All RDF-valid instantiations of the pattern's triple shapes over the
// universe.
std::vector<ITriple> build_pool(const Pattern& p, const Universe& u, TermPool& pool) {
    std::vector<const TriplePattern*> shapes;
    std::vector<const Pattern*> stack{&p};
    while (!stack.empty()) {
        const Pattern* n = stack.back();
        stack.pop_back();
        if (n->kind == PatternKind::Triple) shapes.push_back(&n->triple);
        if (n->left) stack.push_back(n->left.get());
        if (n->right) stack.push_back(n->right.get());
    }
    std::set<ITriple> out;
    for (const TriplePattern* tp : shapes) {
        std::vector<std::string> vars;
        for (const Term* t : {&tp->subject, &tp->predicate, &tp->object}) {
            if (t->is_variable() &&
                std::find(vars.begin(), vars.end(), t->lexical) == vars.end())
                vars.push_back(t->lexical);
        }
        // per-variable domains restricted by the positions the variable uses
        std::map<std::string, unsigned> pos;
        if (tp->subject.is_variable()) pos[tp->subject.lexical] |= kSubj;
        if (tp->predicate.is_variable()) pos[tp->predicate.lexical] |= kPred;
        if (tp->object.is_variable()) pos[tp->object.lexical] |= kObj;
        std::vector<std::vector<const Term*>> domains;
        bool feasible = true;
        for (const auto& v : vars) {
            std::vector<const Term*> dom;
            for (const Term& t : u.terms)
                if (term_fits(t, pos[v])) dom.push_back(&t);
            if (dom.empty()) feasible = false;
            domains.push_back(std::move(dom));
        }
        if (!feasible) continue;
        std::vector<std::size_t> choice(vars.size(), 0);
        while (true) {
            auto subst = [&](const Term& t) -> const Term& {
                if (!t.is_variable()) return t;
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == t.lexical) return *domains[i][choice[i]];
                return t;
            };
            RdfTriple cand{subst(tp->subject), subst(tp->predicate), subst(tp->object)};
            if (valid_rdf_triple(cand)) {
                out.insert(
                    {pool.intern(cand[0]), pool.intern(cand[1]), pool.intern(cand[2])});
            }
            if (vars.empty()) break;
            std::size_t k = 0;
            for (; k < choice.size(); ++k) {
                if (++choice[k] < domains[k].size()) break;
                choice[k] = 0;
            }
            if (k == choice.size()) break;
        }
    }
    // value order, not interning order: keeps searches and witnesses
    // reproducible across runs
    std::vector<ITriple> sorted(out.begin(), out.end());
    std::sort(sorted.begin(), sorted.end(), [](const ITriple& a, const ITriple& b) {
        for (int i = 0; i < 3; ++i) {
            if (*a[static_cast<std::size_t>(i)] < *b[static_cast<std::size_t>(i)]) return true;
            if (*b[static_cast<std::size_t>(i)] < *a[static_cast<std::size_t>(i)]) return false;
        }
        return false;
    });
    return sorted;
}

RdfDataset to_public_graph(const IGraph& g) {
    RdfDataset d;
    for (const ITriple& t : g) d.default_graph.push_back({*t[0], *t[1], *t[2]});
    return d;
}

bool violation(MonoMode mode, const IMappingSet& s1, const IMappingSet& s2,
               std::size_t& witness_index) {
    if (mode == MonoMode::Plain) {
        for (std::size_t i = 0; i < s1.size(); ++i) {
            if (!std::binary_search(s2.begin(), s2.end(), s1[i])) {
                witness_index = i;
                return true;
            }
        }
        return false;
    }
    for (std::size_t i = 0; i < s1.size(); ++i) {
        bool extended = false;
        for (const auto& m2 : s2) {
            if (detail::imapping_subsumed(s1[i], m2)) {
                extended = true;
                break;
            }
        }
        if (!extended) {
            witness_index = i;
            return true;
        }
    }
    return false;
}

}  // namespace

MonoSearchResult search_monotonicity_counterexample(const Pattern& p, MonoMode mode,
                                                    const OracleBudget& budget) {
    MonoSearchResult res;
    TermPool pool;
    CompiledPattern cp = detail::compile_pattern(p, pool);
    AtomScan scan;
    scan_pattern(p, scan);
    Universe u = build_universe(p, false, scan);
    std::vector<ITriple> candidates = build_pool(p, u, pool);
    if (candidates.size() > budget.max_pool) {
        res.status = SearchStatus::BudgetExceeded;
        return res;
    }

    IGraph g1;
    std::vector<std::size_t> chosen;
    bool exceeded = false;

    // G1 of size s, G2 = G1 + one candidate; all subset pairs up to the
    // budget are covered through chains of such extensions.
    auto try_extensions = [&](auto&& self, std::size_t start) -> bool {
        IMappingSet base = detail::eval_on_graph(cp, g1);
        if (!base.empty()) {
            for (std::size_t t = 0; t < candidates.size(); ++t) {
                if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) continue;
                if (++res.checks > budget.max_checks) {
                    exceeded = true;
                    return false;
                }
                g1.push_back(candidates[t]);
                IMappingSet grown = detail::eval_on_graph(cp, g1);
                g1.pop_back();
                std::size_t wi = 0;
                if (violation(mode, base, grown, wi)) {
                    MonoCounterexample cex;
                    cex.g1 = to_public_graph(g1);
                    IGraph g2 = g1;
                    g2.push_back(candidates[t]);
                    cex.g2 = to_public_graph(g2);
                    // pick the value-least violating mapping so the reported
                    // witness does not depend on interning order
                    Mapping best = detail::to_public_mapping(base[wi], cp);
                    for (std::size_t j = wi + 1; j < base.size(); ++j) {
                        std::size_t k = j;
                        IMappingSet one{base[j]};
                        if (violation(mode, one, grown, k)) {
                            Mapping m = detail::to_public_mapping(base[j], cp);
                            if (m < best) best = std::move(m);
                        }
                    }
                    cex.witness = std::move(best);
                    res.counterexample = std::move(cex);
                    return true;
                }
            }
        }
        if (g1.size() + 1 >= budget.max_graph_triples) return false;
        for (std::size_t i = start; i < candidates.size(); ++i) {
            g1.push_back(candidates[i]);
            chosen.push_back(i);
            bool found = self(self, i + 1);
            chosen.pop_back();
            g1.pop_back();
            if (found || exceeded) return found;
        }
        return false;
    };

    bool found = try_extensions(try_extensions, 0);
    if (exceeded) {
        res.status = SearchStatus::BudgetExceeded;
        return res;
    }
    if (found) {
        res.status = SearchStatus::Found;
        if (!verify_counterexample(p, mode, *res.counterexample)) {
            // an unverifiable witness would be an evaluator bug; stay honest
            res.status = SearchStatus::NoneWithinBudget;
            res.counterexample.reset();
        }
    }
    return res;
}

bool verify_counterexample(const Pattern& p, MonoMode mode, const MonoCounterexample& c) {
    MappingSet s1 = eval_pattern(p, c.g1);
    MappingSet s2 = eval_pattern(p, c.g2);
    if (!s1.count(c.witness)) return false;
    if (mode == MonoMode::Plain) return s2.count(c.witness) == 0;
    for (const auto& m2 : s2) {
        if (mapping_subsumed(c.witness, m2)) return false;
    }
    return true;
}

namespace {

// graph context of each triple shape: default graph or an enclosing GRAPH
struct PlacedShape {
    const TriplePattern* shape;
    const Pattern* graph_node;  // innermost enclosing Graph*, null for default
};

void collect_placed(const Pattern& p, const Pattern* ctx, std::vector<PlacedShape>& out) {
    if (p.kind == PatternKind::Triple) {
        out.push_back({&p.triple, ctx});
        return;
    }
    const Pattern* next = (p.kind == PatternKind::GraphIri || p.kind == PatternKind::GraphVar)
                              ? &p
                              : ctx;
    if (p.left) collect_placed(*p.left, next, out);
    if (p.right) collect_placed(*p.right, next, out);
}

}  // namespace

SatSearchResult brute_force_satisfiable(const Pattern& p, const OracleBudget& budget) {
    SatSearchResult res;
    AtomScan scan;
    scan_pattern(p, scan);
    Universe u = build_universe(p, true, scan);

    TermPool pool;
    CompiledPattern cp = detail::compile_pattern(p, pool);

    // Phase A: instantiate every triple under one variable assignment.
    std::map<std::string, unsigned> positions;
    collect_var_positions(p, positions);
    std::vector<std::string> vars;
    std::vector<std::vector<const Term*>> domains;
    bool feasible = true;
    for (const auto& [v, pos] : positions) {
        std::vector<const Term*> dom;
        for (const Term& t : u.terms)
            if (term_fits(t, pos)) dom.push_back(pool.intern(t));
        if (dom.empty()) feasible = false;
        vars.push_back(v);
        domains.push_back(std::move(dom));
    }

    std::vector<PlacedShape> placed;
    collect_placed(p, nullptr, placed);

    bool exceeded = false;
    if (feasible) {
        std::vector<std::size_t> choice(vars.size(), 0);
        while (true) {
            if (++res.checks > budget.max_checks) {
                exceeded = true;
                break;
            }
            auto value_of = [&](const std::string& name) -> const Term* {
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] == name) return domains[i][choice[i]];
                return nullptr;
            };
            auto subst = [&](const Term& t) -> const Term* {
                if (t.is_variable()) return value_of(t.lexical);
                return pool.intern(t);
            };
            IDataset d;
            auto graph_of = [&](const Pattern* g) -> IGraph* {
                if (!g) return &d.default_graph;
                const Term* name = g->kind == PatternKind::GraphIri
                                       ? pool.intern(g->graph)
                                       : value_of(g->graph.lexical);
                for (auto& [n, gr] : d.named)
                    if (n == name) return &gr;
                d.named.emplace_back(name, IGraph{});
                return &d.named.back().second;
            };
            for (const PlacedShape& ps : placed) {
                const Term* s = subst(ps.shape->subject);
                const Term* pr = subst(ps.shape->predicate);
                const Term* o = subst(ps.shape->object);
                RdfTriple cand{*s, *pr, *o};
                if (!valid_rdf_triple(cand)) continue;
                IGraph* g = graph_of(ps.graph_node);
                ITriple t{s, pr, o};
                if (std::find(g->begin(), g->end(), t) == g->end()) g->push_back(t);
            }
            if (!detail::eval_compiled(cp, d).empty()) {
                RdfDataset witness;
                for (const ITriple& t : d.default_graph)
                    witness.default_graph.push_back({*t[0], *t[1], *t[2]});
                for (const auto& [n, g] : d.named)
                    for (const ITriple& t : g)
                        witness.named[n->lexical].push_back({*t[0], *t[1], *t[2]});
                if (!eval_pattern(p, witness).empty()) {
                    res.status = SearchStatus::Found;
                    res.witness = std::move(witness);
                    return res;
                }
            }
            if (vars.empty()) break;
            std::size_t k = 0;
            for (; k < choice.size(); ++k) {
                if (++choice[k] < domains[k].size()) break;
                choice[k] = 0;
            }
            if (k == choice.size()) break;
        }
    }

    if (exceeded) {
        res.status = SearchStatus::BudgetExceeded;
        return res;
    }

    if (!contains_opt(p)) {
        res.status = SearchStatus::NoneWithinBudget;
        res.exhaustive = scan.safe_vocabulary;
        return res;
    }

    // Phase B: subset enumeration over the instantiation pool; needed when a
    // witness must avoid matching some OPT right side.
    std::vector<ITriple> candidates = build_pool(p, u, pool);
    bool graphs_present = contains_graph(p);
    if (candidates.size() > budget.max_pool || graphs_present) {
        // subset placement across named graphs is not explored
        res.status = SearchStatus::NoneWithinBudget;
        return res;
    }
    IGraph g;
    std::vector<std::size_t> chosen;
    auto rec = [&](auto&& self, std::size_t start) -> bool {
        if (++res.checks > budget.max_checks) {
            exceeded = true;
            return false;
        }
        if (!detail::eval_on_graph(cp, g).empty()) {
            RdfDataset witness = to_public_graph(g);
            if (!eval_pattern(p, witness).empty()) {
                res.witness = std::move(witness);
                return true;
            }
        }
        if (g.size() >= budget.max_graph_triples) return false;
        for (std::size_t i = start; i < candidates.size(); ++i) {
            g.push_back(candidates[i]);
            bool found = self(self, i + 1);
            g.pop_back();
            if (found || exceeded) return found;
        }
        return false;
    };
    if (rec(rec, 0)) {
        res.status = SearchStatus::Found;
        return res;
    }
    res.status = exceeded ? SearchStatus::BudgetExceeded : SearchStatus::NoneWithinBudget;
    return res;
}

}  // namespace sparqlstat
