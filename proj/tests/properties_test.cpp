#include "doctest.h"

#include <random>

#include "sparqlstat/eval.hpp"
#include "sparqlstat/serialize.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace sparqlstat;
using namespace sparqlstat::testing;

namespace {

void collect_subtrees(const Pattern& p, std::vector<const Pattern*>& out) {
    out.push_back(&p);
    if (p.left) collect_subtrees(*p.left, out);
    if (p.right) collect_subtrees(*p.right, out);
}

bool signature_subset(const FragmentSignature& a, const FragmentSignature& b) {
    return (!a.has_and || b.has_and) && (!a.has_filter || b.has_filter) &&
           (!a.has_graph || b.has_graph) && (!a.has_opt || b.has_opt) &&
           (!a.has_union || b.has_union);
}

}  // namespace

TEST_CASE("fragment signatures are monotone under subtree embedding") {
    std::mt19937 rng(101);
    for (int i = 0; i < 200; ++i) {
        GenOptions opts;
        opts.max_depth = 4;
        PatternPtr p = random_pattern(rng, opts);
        FragmentSignature whole = fragment_signature(*p);
        std::vector<const Pattern*> subs;
        collect_subtrees(*p, subs);
        for (const Pattern* s : subs)
            REQUIRE(signature_subset(fragment_signature(*s), whole));
    }
}

TEST_CASE("triple counts are additive over binary operators") {
    std::mt19937 rng(102);
    for (int i = 0; i < 200; ++i) {
        GenOptions opts;
        opts.max_depth = 4;
        PatternPtr p = random_pattern(rng, opts);
        std::vector<const Pattern*> subs;
        collect_subtrees(*p, subs);
        for (const Pattern* s : subs) {
            switch (s->kind) {
                case PatternKind::And:
                case PatternKind::Union:
                case PatternKind::Opt:
                    REQUIRE(count_triple_patterns(*s) ==
                            count_triple_patterns(*s->left) + count_triple_patterns(*s->right));
                    break;
                case PatternKind::Filter:
                case PatternKind::GraphIri:
                case PatternKind::GraphVar:
                    REQUIRE(count_triple_patterns(*s) == count_triple_patterns(*s->left));
                    break;
                default:
                    break;
            }
        }
    }
}

TEST_CASE("join is commutative and union idempotent on random instances") {
    std::mt19937 rng(103);
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl")};
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        GenOptions opts;
        opts.max_depth = 2;
        opts.allow_graph = false;
        opts.allow_opt = false;
        opts.allow_union = false;
        opts.allow_filter = false;
        PatternPtr a = random_pattern(rng, opts);
        PatternPtr b = random_pattern(rng, opts);
        if (count_triple_patterns(*a) + count_triple_patterns(*b) > 3) continue;
        PatternPtr ab = Pattern::conj(a->clone(), b->clone());
        PatternPtr ba = Pattern::conj(b->clone(), a->clone());
        PatternPtr uu = Pattern::disj(a->clone(), a->clone());
        auto candidates = shaped_candidates(*ab, extra);
        if (candidates.size() > 10) candidates.resize(10);
        for (const auto& d : all_subset_graphs(candidates, 2)) {
            REQUIRE(eval_pattern(*ab, d) == eval_pattern(*ba, d));
            REQUIRE(eval_pattern(*uu, d) == eval_pattern(*a, d));
            ++checked;
        }
    }
    CHECK(checked > 80);
}

TEST_CASE("every left mapping survives an OPT, possibly extended") {
    std::mt19937 rng(104);
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl")};
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        GenOptions opts;
        opts.max_depth = 2;
        opts.allow_graph = false;
        opts.allow_union = false;
        PatternPtr left = random_pattern(rng, opts);
        PatternPtr right = random_pattern(rng, opts);
        if (count_triple_patterns(*left) + count_triple_patterns(*right) > 3) continue;
        PatternPtr opt = Pattern::opt(left->clone(), right->clone());
        auto candidates = shaped_candidates(*opt, extra);
        if (candidates.size() > 10) candidates.resize(10);
        for (const auto& d : all_subset_graphs(candidates, 2)) {
            REQUIRE(subsumed(eval_pattern(*left, d), eval_pattern(*opt, d)));
            ++checked;
        }
    }
    CHECK(checked > 80);
}

TEST_CASE("filters only shrink solution sets") {
    std::mt19937 rng(105);
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl"),
                            Term::literal("5", "", "http://www.w3.org/2001/XMLSchema#integer")};
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        GenOptions opts;
        opts.max_depth = 3;
        opts.allow_graph = false;
        PatternPtr p = random_pattern(rng, opts);
        if (p->kind != PatternKind::Filter) continue;
        if (count_triple_patterns(*p) > 3) continue;
        auto candidates = shaped_candidates(*p, extra);
        if (candidates.size() > 10) candidates.resize(10);
        for (const auto& d : all_subset_graphs(candidates, 2)) {
            MappingSet filtered = eval_pattern(*p, d);
            MappingSet inner = eval_pattern(*p->left, d);
            for (const auto& m : filtered) REQUIRE(inner.count(m) == 1);
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("opt-free patterns are monotonic under graph growth") {
    std::mt19937 rng(106);
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl")};
    int checked = 0;
    for (int i = 0; i < 30; ++i) {
        GenOptions opts;
        opts.max_depth = 3;
        opts.allow_opt = false;
        opts.allow_graph = false;
        PatternPtr p = random_pattern(rng, opts);
        if (count_triple_patterns(*p) > 2) continue;
        auto candidates = shaped_candidates(*p, extra);
        if (candidates.size() > 8) candidates.resize(8);
        auto graphs = all_subset_graphs(candidates, 2);
        for (const auto& g1 : graphs) {
            MappingSet s1 = eval_pattern(*p, g1);
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                RdfDataset g2 = g1;
                g2.default_graph.push_back(candidates[c]);
                MappingSet s2 = eval_pattern(*p, g2);
                for (const auto& m : s1) REQUIRE(s2.count(m) == 1);
            }
            ++checked;
        }
    }
    CHECK(checked > 60);
}

TEST_CASE("random pattern trees round-trip through concrete syntax") {
    // Serialization is not injective on programmatic trees (a Not node over
    // an atom and the atom's negated flag print identically), so the
    // guarantee is the parse fixpoint: once parsed, another
    // serialize/parse cycle reproduces the tree exactly.
    std::mt19937 rng(107);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        GenOptions opts;
        opts.max_depth = 4;
        PatternPtr p = random_pattern(rng, opts);
        std::string text = "SELECT * WHERE " + serialize_pattern(*p);
        CAPTURE(text);
        ParseResult r1 = parse_query(text);
        REQUIRE(parse_ok(r1));
        const Query& q1 = std::get<Query>(r1);
        ParseResult r2 = parse_query(serialize(q1));
        REQUIRE(parse_ok(r2));
        REQUIRE(q1.equals(std::get<Query>(r2)));
        ++checked;
    }
    CHECK(checked == 300);
}
