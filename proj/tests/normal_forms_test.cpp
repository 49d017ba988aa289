#include "doctest.h"

#include <random>

#include "sparqlstat/eval.hpp"
#include "sparqlstat/normal_forms.hpp"
#include "sparqlstat/serialize.hpp"
#include "support/generators.hpp"
#include "support/helpers.hpp"

using namespace sparqlstat;
using sparqlstat::testing::pat;

TEST_CASE("safety") {
    // the fragment-undecidability example of the introduction
    CHECK_FALSE(is_safe(*pat("{ ?x <p> ?y FILTER (?x != ?z && ?y = <c>) }")).safe);
    CHECK(is_safe(*pat("{ ?x <p> ?y FILTER (?x = <a>) }")).safe);
    SafetyResult s = is_safe(*pat("{ ?x <a> <b> FILTER bound(?y) }"));
    CHECK_FALSE(s.safe);
    CHECK(s.variable == "y");
}

TEST_CASE("unf recognizers") {
    CHECK(is_unf(*pat("{ { ?a <p> ?b } UNION { ?a <q> ?b . ?b <r> ?c } }")));
    CHECK_FALSE(is_unf(*pat("{ { { ?a <p> ?b } UNION { ?a <q> ?b } } . ?c <r> ?d }")));
    PatternPtr t = pat("{ ?a <p> ?b }");
    CHECK(is_unf(*t));
    CHECK(is_union_free(*t));
}

TEST_CASE("to_unf distributes union out of and") {
    PatternPtr p = pat("{ { ?a <p> ?b } UNION { ?a <q> ?b } . ?a <r> ?c }");
    UnfResult r = to_unf(*p);
    REQUIRE(r.rewritable);
    PatternPtr expect = pat("{ { ?a <p> ?b . ?a <r> ?c } UNION { ?a <q> ?b . ?a <r> ?c } }");
    CHECK(r.pattern->equals(*expect));
}

TEST_CASE("to_unf distributes through opt-left, filter and graph") {
    PatternPtr p =
        pat("{ { { ?a <p> ?b } UNION { ?a <q> ?b } } OPTIONAL { ?a <r> ?c } }");
    UnfResult r = to_unf(*p);
    REQUIRE(r.rewritable);
    PatternPtr expect = pat(
        "{ { ?a <p> ?b OPTIONAL { ?a <r> ?c } } UNION "
        "{ ?a <q> ?b OPTIONAL { ?a <r> ?c } } }");
    CHECK(r.pattern->equals(*expect));

    PatternPtr f = pat("{ { { ?a <p> ?b } UNION { ?a <q> ?b } } FILTER bound(?a) }");
    UnfResult rf = to_unf(*f);
    REQUIRE(rf.rewritable);
    CHECK(rf.branches().size() == 2);
    CHECK(rf.branches()[0]->kind == PatternKind::Filter);

    PatternPtr g = pat("{ GRAPH <g> { { ?a <p> ?b } UNION { ?a <q> ?b } } }");
    UnfResult rg = to_unf(*g);
    REQUIRE(rg.rewritable);
    CHECK(rg.branches().size() == 2);
    CHECK(rg.branches()[0]->kind == PatternKind::GraphIri);
}

TEST_CASE("to_unf blocks on union inside an opt right side") {
    // exception case (1) of the monotonicity procedure
    PatternPtr p = pat("{ ?x <p> ?y OPTIONAL { { ?x <q> ?z } UNION { ?x <r> ?u } } }");
    UnfResult r = to_unf(*p);
    CHECK_FALSE(r.rewritable);
    CHECK_FALSE(r.exceeded_limit);
    const Pattern* blocking = subpattern_at(*p, r.blocking_opt);
    REQUIRE(blocking != nullptr);
    CHECK(blocking->kind == PatternKind::Opt);
    CHECK(contains_union(*blocking->right));
}

TEST_CASE("rewritable unions under an opt left child do not spuriously block") {
    PatternPtr p = pat(
        "{ { { { ?a <p> ?b } UNION { ?a <q> ?b } } OPTIONAL { ?a <r> ?c } } . ?c <s> ?d }");
    UnfResult r = to_unf(*p);
    REQUIRE(r.rewritable);
    CHECK(r.branches().size() == 2);
}

TEST_CASE("to_unf keeps already-UNF input unchanged and is idempotent") {
    PatternPtr p = pat("{ { ?a <p> ?b } UNION { ?a <q> ?b } UNION { ?a <r> ?b } }");
    UnfResult r1 = to_unf(*p);
    REQUIRE(r1.rewritable);
    CHECK(r1.pattern->equals(*p));  // left-nested UNF stays as parsed

    PatternPtr q = pat("{ { ?a <p> ?b } UNION { ?a <q> ?b } . ?a <r> ?c }");
    UnfResult once = to_unf(*q);
    REQUIRE(once.rewritable);
    UnfResult twice = to_unf(*once.pattern);
    REQUIRE(twice.rewritable);
    CHECK(twice.pattern->equals(*once.pattern));
}

TEST_CASE("well-designedness of the flagship pattern") {
    WdVerdict v = is_well_designed_pattern(*pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }"));
    CHECK(v.well_designed());
    CHECK(v.reason == WdReason::UnionFreeWd);
}

TEST_CASE("nested-opt variable reuse is caught with a witness") {
    // remaining case (4): ((?x,a,b) OPT (?y,c,d)) OPT (?y,d,e)
    PatternPtr p = pat(
        "{ { ?x <a> <b> OPTIONAL { ?y <c> <d> } } OPTIONAL { ?y <d> <e> } }");
    WdVerdict v = is_well_designed_pattern(*p);
    CHECK_FALSE(v.well_designed());
    CHECK(v.reason == WdReason::OptConditionViolated);
    REQUIRE(v.witness.has_value());
    CHECK(v.witness->variable == "y");
    const Pattern* w = subpattern_at(*p, v.witness->subpattern);
    REQUIRE(w != nullptr);
    REQUIRE(w->kind == PatternKind::Opt);
    // the witness re-checks independently: ?y occurs in P2, outside P', not in P1
    CHECK(occurrence_vars(*w->right).count("y"));
    CHECK_FALSE(occurrence_vars(*w->left).count("y"));
}

TEST_CASE("unsafe filters disqualify") {
    WdVerdict v = is_well_designed_pattern(
        *pat("{ ?x <p> ?y FILTER (?x != ?z && ?y = <c>) }"));
    CHECK_FALSE(v.well_designed());
    CHECK(v.reason == WdReason::UnsafeFilter);
}

TEST_CASE("graph and non-built-in conditions short-circuit step 1") {
    CHECK(is_well_designed_pattern(*pat("{ GRAPH <g> { ?x <p> ?y } }")).reason ==
          WdReason::GraphOrNonBuiltin);
    CHECK(is_well_designed_pattern(*pat("{ ?x <p> ?y FILTER (sameTerm(?x, ?y)) }")).reason ==
          WdReason::GraphOrNonBuiltin);
    CHECK(is_well_designed_pattern(
              *pat("{ { { ?a <p> ?b } UNION { ?a <q> ?b } } . ?c <r> ?d }"))
              .reason == WdReason::NotUnf);
}

TEST_CASE("filter occurrences count for the opt condition") {
    // remaining case (3): ((?x,a,b) OPT (?x,c,?y)) FILTER !bound(?y)
    WdVerdict v = is_well_designed_pattern(
        *pat("{ ?x <a> <b> OPTIONAL { ?x <c> ?y } FILTER (!bound(?y)) }"));
    CHECK_FALSE(v.well_designed());
    CHECK(v.reason == WdReason::OptConditionViolated);
    // remaining case (1), the langMatches shape, is likewise not well-designed
    WdVerdict lm = is_well_designed_pattern(
        *pat("{ ?x <p> <a> OPTIONAL { ?x <q> ?y } FILTER (langMatches(lang(?y), \"en\")) }"));
    CHECK_FALSE(lm.well_designed());
}

TEST_CASE("unf branch verdicts") {
    WdVerdict ok = is_well_designed_pattern(
        *pat("{ { ?x <p> ?y OPTIONAL { ?x <q> ?z } } UNION { ?x <r> ?y } }"));
    CHECK(ok.well_designed());
    CHECK(ok.reason == WdReason::AllBranchesWd);

    WdVerdict bad = is_well_designed_pattern(
        *pat("{ { ?x <p> ?y } UNION { ?x <a> <b> FILTER bound(?w) } }"));
    CHECK_FALSE(bad.well_designed());
    CHECK(bad.reason == WdReason::UnionBranchFails);
}

TEST_CASE("opt monotonicity") {
    CHECK(is_opt_monotonic(*pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?y } }")));
    CHECK_FALSE(is_opt_monotonic(*pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }")));
    CHECK(is_opt_monotonic(*pat("{ ?x <p> ?y . ?y <q> ?z }")));
    CHECK_THROWS_AS(is_opt_monotonic(*pat("{ { ?a <p> ?b } UNION { ?a <q> ?b } }")),
                    NotUnionFree);
}

TEST_CASE("opt_core") {
    PatternPtr p = pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    CHECK(opt_core(*p)->equals(*pat("{ ?x <p> ?y }")));

    PatternPtr q = pat("{ ?a <s> ?b . { ?x <p> ?y OPTIONAL { ?x <q> ?z } } }");
    CHECK(opt_core(*q)->equals(*pat("{ ?a <s> ?b . ?x <p> ?y }")));

    PatternPtr r = pat("{ ?x <p> ?y . ?y <q> ?z }");
    CHECK(opt_core(*r)->equals(*r));

    // gated on well-designedness
    PatternPtr bad = pat("{ { ?x <a> <b> OPTIONAL { ?y <c> <d> } } OPTIONAL { ?y <d> <e> } }");
    CHECK_THROWS_AS((void)opt_core(*bad), PreconditionViolated);
}

TEST_CASE("strong unf splits disjunctive filters") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (?x = <a> || isIRI(?y)) }");
    PatternPtr s = to_strong_unf(*p);
    PatternPtr expect = pat(
        "{ { ?x <p> ?y FILTER (?x = <a>) } UNION { ?x <p> ?y FILTER (isIRI(?y)) } }");
    CHECK(s->equals(*expect));
    CHECK(is_strong_unf(*s));
}

TEST_CASE("strong unf splits conjunctions and pushes negations") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (!(?x = <a> && isIRI(?y))) }");
    PatternPtr s = to_strong_unf(*p);
    PatternPtr expect = pat(
        "{ { ?x <p> ?y FILTER (?x != <a>) } UNION { ?x <p> ?y FILTER (!isIRI(?y)) } }");
    CHECK(s->equals(*expect));

    PatternPtr conj = pat("{ ?x <p> ?y FILTER (?x = <a> && isIRI(?y)) }");
    PatternPtr sc = to_strong_unf(*conj);
    PatternPtr expect2 =
        pat("{ { ?x <p> ?y FILTER (?x = <a>) } FILTER (isIRI(?y)) }");
    CHECK(sc->equals(*expect2));

    PatternPtr af = pat("{ ?x <p> ?y . ?y <q> ?z }");
    CHECK(to_strong_unf(*af)->equals(*af));

    CHECK_THROWS_AS((void)to_strong_unf(*pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }")),
                    PreconditionViolated);
}

TEST_CASE("strong unf preserves semantics on exhaustive small graphs") {
    std::mt19937 rng(7);
    using namespace sparqlstat::testing;
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl"),
                            Term::literal("7", "", "http://www.w3.org/2001/XMLSchema#integer")};
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        GenOptions opts;
        opts.max_depth = 3;
        opts.allow_opt = false;
        opts.allow_graph = false;
        opts.allow_union = true;
        PatternPtr p = random_pattern(rng, opts);
        if (count_triple_patterns(*p) > 2) continue;
        PatternPtr s = to_strong_unf(*p);
        auto candidates = shaped_candidates(*p, extra);
        if (candidates.size() > 12) candidates.resize(12);
        for (const auto& d : all_subset_graphs(candidates, 2)) {
            REQUIRE(eval_pattern(*p, d) == eval_pattern(*s, d));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("to_unf preserves semantics") {
    std::mt19937 rng(11);
    using namespace sparqlstat::testing;
    std::vector<Term> extra{Term::iri("f1"), Term::literal("fl")};
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        GenOptions opts;
        opts.max_depth = 3;
        opts.allow_graph = false;
        PatternPtr p = random_pattern(rng, opts);
        if (count_triple_patterns(*p) > 3) continue;
        UnfResult r = to_unf(*p);
        if (!r.rewritable) continue;
        auto candidates = shaped_candidates(*p, extra);
        if (candidates.size() > 10) candidates.resize(10);
        for (const auto& d : all_subset_graphs(candidates, 2)) {
            REQUIRE(eval_pattern(*p, d) == eval_pattern(*r.pattern, d));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("well-designedness agrees with the definitional checker") {
    std::mt19937 rng(3);
    using namespace sparqlstat::testing;
    for (int i = 0; i < 400; ++i) {
        GenOptions opts;
        opts.max_depth = 5;
        PatternPtr p = random_pattern(rng, opts);
        bool expected = definitional_well_designed(*p);
        bool got = is_well_designed_pattern(*p).well_designed();
        CAPTURE(serialize_pattern(*p));
        REQUIRE(expected == got);
    }
}

TEST_CASE("to_unf reports a deep blocking opt by path") {
    PatternPtr p = pat(
        "{ ?a <s> ?b . { ?x <p> ?y OPTIONAL { { ?x <q> ?z } UNION { ?x <r> ?u } } } }");
    UnfResult r = to_unf(*p);
    REQUIRE_FALSE(r.rewritable);
    const Pattern* blocking = subpattern_at(*p, r.blocking_opt);
    REQUIRE(blocking != nullptr);
    CHECK(blocking->kind == PatternKind::Opt);
    CHECK(contains_union(*blocking->right));
}

TEST_CASE("to_unf stops at the branch cap") {
    // thirteen two-way unions joined by AND would distribute into 2^13
    // branches, past the default cap
    std::string group = "{ ";
    for (int i = 0; i < 13; ++i) {
        group += "{ { ?a <p" + std::to_string(i) + "> ?b } UNION { ?a <q" +
                 std::to_string(i) + "> ?b } } . ";
    }
    group += "?a <r> ?c }";
    PatternPtr p = pat(group);
    UnfResult r = to_unf(*p);
    CHECK_FALSE(r.rewritable);
    CHECK(r.exceeded_limit);
    // a generous cap lets the same input through
    UnfResult big = to_unf(*p, 1u << 20);
    CHECK(big.rewritable);
    CHECK(big.branches().size() == 8192);
}
