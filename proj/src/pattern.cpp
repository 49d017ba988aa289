#include "sparqlstat/pattern.hpp"

#include <algorithm>
#include <utility>

namespace sparqlstat {

PatternPtr Pattern::empty() {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::Empty;
    return p;
}

PatternPtr Pattern::triple_pattern(TriplePattern tp) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::Triple;
    p->triple = std::move(tp);
    return p;
}

PatternPtr Pattern::conj(PatternPtr l, PatternPtr r) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::And;
    p->left = std::move(l);
    p->right = std::move(r);
    return p;
}

PatternPtr Pattern::disj(PatternPtr l, PatternPtr r) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::Union;
    p->left = std::move(l);
    p->right = std::move(r);
    return p;
}

PatternPtr Pattern::opt(PatternPtr l, PatternPtr r) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::Opt;
    p->left = std::move(l);
    p->right = std::move(r);
    return p;
}

PatternPtr Pattern::graph_iri(Term iri, PatternPtr child) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::GraphIri;
    p->graph = std::move(iri);
    p->left = std::move(child);
    return p;
}

PatternPtr Pattern::graph_var(Term var, PatternPtr child) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::GraphVar;
    p->graph = std::move(var);
    p->left = std::move(child);
    return p;
}

PatternPtr Pattern::filter(PatternPtr child, ConstraintPtr c) {
    auto p = std::make_unique<Pattern>();
    p->kind = PatternKind::Filter;
    p->left = std::move(child);
    p->condition = std::move(c);
    return p;
}

PatternPtr Pattern::clone() const {
    auto p = std::make_unique<Pattern>();
    p->kind = kind;
    p->triple = triple;
    p->graph = graph;
    if (left) p->left = left->clone();
    if (right) p->right = right->clone();
    if (condition) p->condition = condition->clone();
    return p;
}

bool Pattern::equals(const Pattern& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case PatternKind::Empty: return true;
        case PatternKind::Triple: return triple == o.triple;
        case PatternKind::And:
        case PatternKind::Union:
        case PatternKind::Opt:
            return left->equals(*o.left) && right->equals(*o.right);
        case PatternKind::GraphIri:
        case PatternKind::GraphVar:
            return graph == o.graph && left->equals(*o.left);
        case PatternKind::Filter:
            return condition->equals(*o.condition) && left->equals(*o.left);
    }
    return false;
}

const Pattern* subpattern_at(const Pattern& root, const PatternPath& path) {
    const Pattern* p = &root;
    for (int step : path) {
        const Pattern* next = step == 0 ? p->left.get() : p->right.get();
        if (!next) return nullptr;
        p = next;
    }
    return p;
}

std::string path_to_string(const PatternPath& path) {
    std::string s = "/";
    for (int step : path) s += step == 0 ? "0" : "1";
    return s;
}

Query Query::clone() const {
    Query q;
    q.projection = projection;
    q.body = body->clone();
    return q;
}

bool Query::equals(const Query& o) const {
    return projection == o.projection && body->equals(*o.body);
}

std::size_t count_triple_patterns(const Pattern& p) {
    switch (p.kind) {
        case PatternKind::Triple: return 1;
        case PatternKind::Empty: return 0;
        default: {
            std::size_t n = 0;
            if (p.left) n += count_triple_patterns(*p.left);
            if (p.right) n += count_triple_patterns(*p.right);
            return n;
        }
    }
}

namespace {

void collect_pattern_vars(const Pattern& p, std::set<std::string>& out) {
    switch (p.kind) {
        case PatternKind::Triple:
            for (const Term* t : {&p.triple.subject, &p.triple.predicate, &p.triple.object})
                if (t->is_variable()) out.insert(t->lexical);
            return;
        case PatternKind::GraphVar:
            out.insert(p.graph.lexical);
            break;
        default:
            break;
    }
    if (p.left) collect_pattern_vars(*p.left, out);
    if (p.right) collect_pattern_vars(*p.right, out);
}

void collect_occurrence_vars(const Pattern& p, std::set<std::string>& out) {
    switch (p.kind) {
        case PatternKind::Filter: {
            auto cv = p.condition->variables();
            out.insert(cv.begin(), cv.end());
            break;
        }
        case PatternKind::Triple:
            for (const Term* t : {&p.triple.subject, &p.triple.predicate, &p.triple.object})
                if (t->is_variable()) out.insert(t->lexical);
            return;
        case PatternKind::GraphVar:
            out.insert(p.graph.lexical);
            break;
        default:
            break;
    }
    if (p.left) collect_occurrence_vars(*p.left, out);
    if (p.right) collect_occurrence_vars(*p.right, out);
}

}  // namespace

std::set<std::string> pattern_vars(const Pattern& p) {
    std::set<std::string> out;
    collect_pattern_vars(p, out);
    return out;
}

std::set<std::string> constraint_vars(const Constraint& c) { return c.variables(); }

std::set<std::string> occurrence_vars(const Pattern& p) {
    std::set<std::string> out;
    collect_occurrence_vars(p, out);
    return out;
}

std::string FragmentSignature::to_string() const {
    std::string s;
    if (has_and) s += 'A';
    if (has_filter) s += 'F';
    if (has_graph) s += 'G';
    if (has_opt) s += 'O';
    if (has_union) s += 'U';
    return s.empty() ? "none" : s;
}

FragmentSignature FragmentSignature::from_string(const std::string& s) {
    FragmentSignature f;
    if (s == "none") return f;
    for (char c : s) {
        switch (c) {
            case 'A': f.has_and = true; break;
            case 'F': f.has_filter = true; break;
            case 'G': f.has_graph = true; break;
            case 'O': f.has_opt = true; break;
            case 'U': f.has_union = true; break;
            default: break;
        }
    }
    return f;
}

namespace {

void collect_signature(const Pattern& p, FragmentSignature& f) {
    switch (p.kind) {
        case PatternKind::And: f.has_and = true; break;
        case PatternKind::Union: f.has_union = true; break;
        case PatternKind::Opt: f.has_opt = true; break;
        case PatternKind::Filter: f.has_filter = true; break;
        case PatternKind::GraphIri:
        case PatternKind::GraphVar: f.has_graph = true; break;
        default: break;
    }
    if (p.left) collect_signature(*p.left, f);
    if (p.right) collect_signature(*p.right, f);
}

bool contains_kind(const Pattern& p, PatternKind k1, PatternKind k2) {
    if (p.kind == k1 || p.kind == k2) return true;
    if (p.left && contains_kind(*p.left, k1, k2)) return true;
    if (p.right && contains_kind(*p.right, k1, k2)) return true;
    return false;
}

void collect_atom_constants(const AtomicConstraint& a, std::vector<Term>& out) {
    switch (a.kind) {
        case AtomKind::EqConst:
        case AtomKind::LtConst:
        case AtomKind::LeqConst:
        case AtomKind::GtConst:
        case AtomKind::GeqConst:
        case AtomKind::StrEqConst:
            out.push_back(a.constant);
            break;
        default:
            break;
    }
}

void collect_constraint_constants(const Constraint& c, std::vector<Term>& out) {
    if (c.kind == ConstraintKind::Atomic) {
        collect_atom_constants(c.atom, out);
        return;
    }
    if (c.left) collect_constraint_constants(*c.left, out);
    if (c.right) collect_constraint_constants(*c.right, out);
}

void collect_constants(const Pattern& p, std::vector<Term>& out) {
    switch (p.kind) {
        case PatternKind::Triple:
            for (const Term* t : {&p.triple.subject, &p.triple.predicate, &p.triple.object})
                if (t->is_constant()) out.push_back(*t);
            return;
        case PatternKind::GraphIri:
            out.push_back(p.graph);
            break;
        case PatternKind::Filter:
            collect_constraint_constants(*p.condition, out);
            break;
        default:
            break;
    }
    if (p.left) collect_constants(*p.left, out);
    if (p.right) collect_constants(*p.right, out);
}

}  // namespace

FragmentSignature fragment_signature(const Pattern& p) {
    FragmentSignature f;
    collect_signature(p, f);
    return f;
}

bool contains_opt(const Pattern& p) { return contains_kind(p, PatternKind::Opt, PatternKind::Opt); }
bool contains_union(const Pattern& p) { return contains_kind(p, PatternKind::Union, PatternKind::Union); }
bool contains_graph(const Pattern& p) {
    return contains_kind(p, PatternKind::GraphIri, PatternKind::GraphVar);
}
bool contains_filter(const Pattern& p) {
    return contains_kind(p, PatternKind::Filter, PatternKind::Filter);
}

std::vector<Term> pattern_constants(const Pattern& p) {
    std::vector<Term> out;
    collect_constants(p, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace sparqlstat
