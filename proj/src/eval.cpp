#include "sparqlstat/eval.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "eval_core.hpp"

namespace sparqlstat {

TruthValue3 and3(TruthValue3 a, TruthValue3 b) {
    if (a == TruthValue3::False || b == TruthValue3::False) return TruthValue3::False;
    if (a == TruthValue3::Error || b == TruthValue3::Error) return TruthValue3::Error;
    return TruthValue3::True;
}

TruthValue3 or3(TruthValue3 a, TruthValue3 b) {
    if (a == TruthValue3::True || b == TruthValue3::True) return TruthValue3::True;
    if (a == TruthValue3::Error || b == TruthValue3::Error) return TruthValue3::Error;
    return TruthValue3::False;
}

TruthValue3 not3(TruthValue3 a) {
    switch (a) {
        case TruthValue3::True: return TruthValue3::False;
        case TruthValue3::False: return TruthValue3::True;
        case TruthValue3::Error: return TruthValue3::Error;
    }
    return TruthValue3::Error;
}

bool mapping_subsumed(const Mapping& m1, const Mapping& m2) {
    for (const auto& [v, t] : m1) {
        auto it = m2.find(v);
        if (it == m2.end() || !(it->second == t)) return false;
    }
    return true;
}

bool subsumed(const MappingSet& s1, const MappingSet& s2) {
    for (const auto& m1 : s1) {
        bool found = false;
        for (const auto& m2 : s2) {
            if (mapping_subsumed(m1, m2)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool mappings_compatible(const Mapping& m1, const Mapping& m2) {
    for (const auto& [v, t] : m1) {
        auto it = m2.find(v);
        if (it != m2.end() && !(it->second == t)) return false;
    }
    return true;
}

namespace detail {

void canonicalize(IMappingSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

bool imapping_subsumed(const IMapping& a, const IMapping& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != nullptr && b[i] != a[i]) return false;
    }
    return true;
}

bool iset_subsumed(const IMappingSet& a, const IMappingSet& b) {
    for (const auto& m1 : a) {
        bool found = false;
        for (const auto& m2 : b) {
            if (imapping_subsumed(m1, m2)) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

bool iset_included(const IMappingSet& a, const IMappingSet& b) {
    // both sorted
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void assign_slots(const std::set<std::string>& vars, CompiledPattern& cp) {
    for (const auto& v : vars) {
        cp.slot_of.emplace(v, static_cast<int>(cp.slot_names.size()));
        cp.slot_names.push_back(v);
    }
}

std::unique_ptr<CompiledNode> compile_node(const Pattern& p, CompiledPattern& cp,
                                           TermPool& pool) {
    auto n = std::make_unique<CompiledNode>();
    n->kind = p.kind;
    switch (p.kind) {
        case PatternKind::Triple: {
            const Term* src[3] = {&p.triple.subject, &p.triple.predicate, &p.triple.object};
            for (int i = 0; i < 3; ++i) {
                if (src[i]->is_variable()) {
                    n->slots[i] = cp.slot_of.at(src[i]->lexical);
                } else {
                    n->terms[i] = pool.intern(*src[i]);
                }
            }
            break;
        }
        case PatternKind::GraphIri:
            n->graph_name = pool.intern(p.graph);
            break;
        case PatternKind::GraphVar:
            n->graph_slot = cp.slot_of.at(p.graph.lexical);
            break;
        case PatternKind::Filter:
            n->condition = p.condition.get();
            break;
        default:
            break;
    }
    if (p.left) n->left = compile_node(*p.left, cp, pool);
    if (p.right) n->right = compile_node(*p.right, cp, pool);
    return n;
}

}  // namespace

CompiledPattern compile_pattern(const Pattern& p, TermPool& pool) {
    CompiledPattern cp;
    assign_slots(occurrence_vars(p), cp);
    cp.root = compile_node(p, cp, pool);
    return cp;
}

IDataset intern_dataset(const RdfDataset& d, TermPool& pool) {
    IDataset out;
    auto intern_graph = [&pool](const std::vector<RdfTriple>& g) {
        IGraph ig;
        ig.reserve(g.size());
        for (const auto& t : g)
            ig.push_back({pool.intern(t[0]), pool.intern(t[1]), pool.intern(t[2])});
        return ig;
    };
    out.default_graph = intern_graph(d.default_graph);
    for (const auto& [name, g] : d.named)
        out.named.emplace_back(pool.intern(Term::iri(name)), intern_graph(g));
    return out;
}

// --- atom evaluation ---------------------------------------------------------

namespace {

bool plain_string(const Term& t) {
    return t.is_literal() && t.lang.empty() && t.datatype.empty();
}

bool term_equal_value(const Term& a, const Term& b) {
    if (a.is_numeric() && b.is_numeric()) return compare_decimal(a.lexical, b.lexical) == 0;
    return a == b;
}

// order comparison: -2 = incomparable (Error)
int order_compare(const Term& a, const Term& b) {
    if (a.is_numeric() && b.is_numeric()) return compare_decimal(a.lexical, b.lexical);
    if (plain_string(a) && plain_string(b)) {
        if (a.lexical == b.lexical) return 0;
        return a.lexical < b.lexical ? -1 : 1;
    }
    return -2;
}

bool ascii_iequal(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

// RFC 4647 basic filtering: "*" matches any nonempty tag, otherwise the
// range equals the tag or is a '-'-delimited prefix of it.
bool lang_matches(const std::string& tag, const std::string& range) {
    if (range == "*") return !tag.empty();
    if (ascii_iequal(tag, range)) return true;
    if (tag.size() > range.size() && tag[range.size()] == '-' &&
        ascii_iequal(tag.substr(0, range.size()), range))
        return true;
    return false;
}

// str() of a term; blank nodes have none.
std::optional<std::string> str_value(const Term& t) {
    if (t.is_iri()) return t.lexical;
    if (t.is_literal()) return t.lexical;
    return std::nullopt;
}

bool regex_search_cached(const std::string& value, const std::string& pattern,
                         bool& bad_pattern) {
    thread_local std::map<std::string, std::optional<std::regex>> cache;
    auto it = cache.find(pattern);
    if (it == cache.end()) {
        std::optional<std::regex> re;
        try {
            re.emplace(pattern, std::regex::extended);
        } catch (const std::regex_error&) {
            re.reset();
        }
        it = cache.emplace(pattern, std::move(re)).first;
    }
    if (!it->second) {
        bad_pattern = true;
        return false;
    }
    bad_pattern = false;
    return std::regex_search(value, *it->second);
}

TruthValue3 from_bool(bool b) { return b ? TruthValue3::True : TruthValue3::False; }

}  // namespace

TruthValue3 atom_truth(const AtomicConstraint& a, const Term* t1, const Term* t2) {
    TruthValue3 v = TruthValue3::Error;
    switch (a.kind) {
        case AtomKind::Bound:
            v = from_bool(t1 != nullptr);
            break;
        case AtomKind::EqConst:
            v = t1 ? from_bool(term_equal_value(*t1, a.constant)) : TruthValue3::Error;
            break;
        case AtomKind::EqVar:
            v = (t1 && t2) ? from_bool(term_equal_value(*t1, *t2)) : TruthValue3::Error;
            break;
        case AtomKind::LtConst:
        case AtomKind::LeqConst:
        case AtomKind::GtConst:
        case AtomKind::GeqConst: {
            if (!t1) break;
            int c = order_compare(*t1, a.constant);
            if (c == -2) break;
            switch (a.kind) {
                case AtomKind::LtConst: v = from_bool(c < 0); break;
                case AtomKind::LeqConst: v = from_bool(c <= 0); break;
                case AtomKind::GtConst: v = from_bool(c > 0); break;
                default: v = from_bool(c >= 0); break;
            }
            break;
        }
        case AtomKind::IsIri:
            v = t1 ? from_bool(t1->is_iri()) : TruthValue3::Error;
            break;
        case AtomKind::IsBlank:
            v = t1 ? from_bool(t1->is_blank()) : TruthValue3::Error;
            break;
        case AtomKind::IsLiteral:
            v = t1 ? from_bool(t1->is_literal()) : TruthValue3::Error;
            break;
        case AtomKind::StrEqConst: {
            if (!t1) break;
            auto s = str_value(*t1);
            if (!s) break;
            v = from_bool(*s == a.constant.lexical);
            break;
        }
        case AtomKind::LangEqConst:
            if (!t1 || !t1->is_literal()) break;
            v = from_bool(ascii_iequal(t1->lang, a.text));
            break;
        case AtomKind::LangMatches:
            if (!t1 || !t1->is_literal()) break;
            v = from_bool(lang_matches(t1->lang, a.text));
            break;
        case AtomKind::RegexStr: {
            if (!t1) break;
            auto s = str_value(*t1);
            if (!s) break;
            bool bad = false;
            bool hit = regex_search_cached(*s, a.text, bad);
            if (bad) break;
            v = from_bool(hit);
            break;
        }
        case AtomKind::RegexVar: {
            if (!t1 || !t1->is_literal()) break;
            bool bad = false;
            bool hit = regex_search_cached(t1->lexical, a.text, bad);
            if (bad) break;
            v = from_bool(hit);
            break;
        }
        case AtomKind::Opaque:
            v = TruthValue3::Error;
            break;
    }
    return a.negated ? not3(v) : v;
}

TruthValue3 constraint_truth(const Constraint& c, const CompiledPattern& cp,
                             const IMapping& m) {
    switch (c.kind) {
        case ConstraintKind::Atomic: {
            const AtomicConstraint& a = c.atom;
            auto resolve = [&](const std::string& name) -> const Term* {
                auto it = cp.slot_of.find(name);
                if (it == cp.slot_of.end()) return nullptr;
                return m[static_cast<std::size_t>(it->second)];
            };
            if (a.kind == AtomKind::Opaque)
                return a.negated ? not3(TruthValue3::Error) : TruthValue3::Error;
            const Term* t1 = resolve(a.var);
            const Term* t2 = a.kind == AtomKind::EqVar ? resolve(a.var2) : nullptr;
            return atom_truth(a, t1, t2);
        }
        case ConstraintKind::And:
            return and3(constraint_truth(*c.left, cp, m), constraint_truth(*c.right, cp, m));
        case ConstraintKind::Or:
            return or3(constraint_truth(*c.left, cp, m), constraint_truth(*c.right, cp, m));
        case ConstraintKind::Not:
            return not3(constraint_truth(*c.left, cp, m));
    }
    return TruthValue3::Error;
}

// --- compiled evaluation -------------------------------------------------------

namespace {

bool join_rows(const IMapping& a, const IMapping& b, IMapping& out) {
    out = a;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!b[i]) continue;
        if (out[i] && out[i] != b[i]) return false;
        out[i] = b[i];
    }
    return true;
}

IMappingSet eval_rec(const CompiledNode& n, const IGraph* active, const IDataset& d,
                     const CompiledPattern& cp) {
    switch (n.kind) {
        case PatternKind::Empty:
            return {IMapping(cp.var_count(), nullptr)};
        case PatternKind::Triple: {
            IMappingSet out;
            if (!active) return out;
            for (const auto& t : *active) {
                IMapping m(cp.var_count(), nullptr);
                bool ok = true;
                for (int i = 0; i < 3 && ok; ++i) {
                    if (n.slots[i] >= 0) {
                        auto s = static_cast<std::size_t>(n.slots[i]);
                        if (m[s] && m[s] != t[static_cast<std::size_t>(i)]) {
                            ok = false;
                        } else {
                            m[s] = t[static_cast<std::size_t>(i)];
                        }
                    } else if (n.terms[i] != t[static_cast<std::size_t>(i)]) {
                        ok = false;
                    }
                }
                if (ok) out.push_back(std::move(m));
            }
            canonicalize(out);
            return out;
        }
        case PatternKind::And: {
            IMappingSet l = eval_rec(*n.left, active, d, cp);
            if (l.empty()) return l;
            IMappingSet r = eval_rec(*n.right, active, d, cp);
            IMappingSet out;
            IMapping merged;
            for (const auto& a : l) {
                for (const auto& b : r) {
                    if (join_rows(a, b, merged)) out.push_back(merged);
                }
            }
            canonicalize(out);
            return out;
        }
        case PatternKind::Union: {
            IMappingSet l = eval_rec(*n.left, active, d, cp);
            IMappingSet r = eval_rec(*n.right, active, d, cp);
            l.insert(l.end(), r.begin(), r.end());
            canonicalize(l);
            return l;
        }
        case PatternKind::Opt: {
            IMappingSet l = eval_rec(*n.left, active, d, cp);
            if (l.empty()) return l;
            IMappingSet r = eval_rec(*n.right, active, d, cp);
            IMappingSet out;
            IMapping merged;
            for (const auto& a : l) {
                bool extended = false;
                for (const auto& b : r) {
                    if (join_rows(a, b, merged)) {
                        out.push_back(merged);
                        extended = true;
                    }
                }
                if (!extended) out.push_back(a);
            }
            canonicalize(out);
            return out;
        }
        case PatternKind::GraphIri: {
            const IGraph* g = d.find_named(n.graph_name);
            if (!g) return {};
            return eval_rec(*n.left, g, d, cp);
        }
        case PatternKind::GraphVar: {
            IMappingSet out;
            auto slot = static_cast<std::size_t>(n.graph_slot);
            for (const auto& [name, g] : d.named) {
                IMappingSet sub = eval_rec(*n.left, &g, d, cp);
                for (auto& m : sub) {
                    if (m[slot] && m[slot] != name) continue;
                    IMapping e = m;
                    e[slot] = name;
                    out.push_back(std::move(e));
                }
            }
            canonicalize(out);
            return out;
        }
        case PatternKind::Filter: {
            IMappingSet sub = eval_rec(*n.left, active, d, cp);
            IMappingSet out;
            for (auto& m : sub) {
                if (constraint_truth(*n.condition, cp, m) == TruthValue3::True)
                    out.push_back(std::move(m));
            }
            return out;  // already sorted
        }
    }
    return {};
}

}  // namespace

IMappingSet eval_compiled(const CompiledPattern& cp, const IDataset& d) {
    return eval_rec(*cp.root, &d.default_graph, d, cp);
}

IMappingSet eval_on_graph(const CompiledPattern& cp, const IGraph& g) {
    static const IDataset empty_dataset;
    return eval_rec(*cp.root, &g, empty_dataset, cp);
}

Mapping to_public_mapping(const IMapping& m, const CompiledPattern& cp) {
    Mapping out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i]) out.emplace(cp.slot_names[i], *m[i]);
    }
    return out;
}

MappingSet to_public_set(const IMappingSet& s, const CompiledPattern& cp) {
    MappingSet out;
    for (const auto& m : s) out.insert(to_public_mapping(m, cp));
    return out;
}

}  // namespace detail

MappingSet eval_pattern(const Pattern& p, const RdfDataset& d) {
    detail::TermPool pool;
    detail::CompiledPattern cp = detail::compile_pattern(p, pool);
    detail::IDataset id = detail::intern_dataset(d, pool);
    return detail::to_public_set(detail::eval_compiled(cp, id), cp);
}

TruthValue3 eval_constraint(const Constraint& c, const Mapping& m) {
    switch (c.kind) {
        case ConstraintKind::Atomic:
            return eval_atomic(c.atom, m);
        case ConstraintKind::And:
            return and3(eval_constraint(*c.left, m), eval_constraint(*c.right, m));
        case ConstraintKind::Or:
            return or3(eval_constraint(*c.left, m), eval_constraint(*c.right, m));
        case ConstraintKind::Not:
            return not3(eval_constraint(*c.left, m));
    }
    return TruthValue3::Error;
}

TruthValue3 eval_atomic(const AtomicConstraint& a, const Mapping& m) {
    if (a.kind == AtomKind::Opaque)
        return a.negated ? not3(TruthValue3::Error) : TruthValue3::Error;
    auto find = [&m](const std::string& v) -> const Term* {
        auto it = m.find(v);
        return it == m.end() ? nullptr : &it->second;
    };
    const Term* t1 = find(a.var);
    const Term* t2 = a.kind == AtomKind::EqVar ? find(a.var2) : nullptr;
    return detail::atom_truth(a, t1, t2);
}

MappingSet eval_query(const Query& q, const RdfDataset& d) {
    MappingSet all = eval_pattern(*q.body, d);
    MappingSet out;
    for (const auto& m : all) {
        Mapping proj;
        for (const auto& v : q.projection) {
            auto it = m.find(v);
            if (it != m.end()) proj.emplace(it->first, it->second);
        }
        out.insert(std::move(proj));
    }
    return out;
}

}  // namespace sparqlstat
