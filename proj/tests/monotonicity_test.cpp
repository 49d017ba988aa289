#include "doctest.h"

#include "sparqlstat/monotonicity.hpp"
#include "support/helpers.hpp"

using namespace sparqlstat;
using sparqlstat::testing::must_parse;
using sparqlstat::testing::pat;

namespace {

MonotonicityVerdict classify(const std::string& query, bool oracle = false) {
    MonoOptions opts;
    opts.use_oracle = oracle;
    return classify_monotonicity(must_parse(query), opts);
}

}  // namespace

TEST_CASE("opt-free queries are monotonic") {
    MonotonicityVerdict v = classify("SELECT * WHERE { ?x <p> ?y . ?y <q> ?z }");
    CHECK(v.cls == MonoClass::Monotonic);
    CHECK(v.rule == MonoRule::OptFree);
    // filters do not change this
    CHECK(classify("SELECT * WHERE { ?x <p> ?y FILTER (!bound(?w)) }").rule ==
          MonoRule::OptFree);
}

TEST_CASE("opt-monotonic branches give monotonic") {
    MonotonicityVerdict v =
        classify("SELECT * WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?y } }");
    CHECK(v.cls == MonoClass::Monotonic);
    CHECK(v.rule == MonoRule::OptMonotonic);
}

TEST_CASE("the flagship pattern is weakly monotonic with plain evidence") {
    MonotonicityVerdict v =
        classify("SELECT * WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } }", true);
    CHECK(v.cls == MonoClass::WeaklyMonotonic);
    CHECK(v.rule == MonoRule::AllBranchesWellDesigned);
    REQUIRE(v.plain_evidence.has_value());
    PatternPtr p = pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    CHECK(verify_counterexample(*p, MonoMode::Plain, *v.plain_evidence));
}

TEST_CASE("graph wrappers are transparent") {
    MonotonicityVerdict v =
        classify("SELECT * WHERE { GRAPH ?g { ?x <p> ?y OPTIONAL { ?x <q> ?z } } }");
    CHECK(v.cls == MonoClass::WeaklyMonotonic);
}

TEST_CASE("exception templates match their shapes") {
    // case (1): OPT over a UNION of fresh-variable triples
    PatternPtr c1 = pat(
        "{ ?x <p> ?y OPTIONAL { { ?x <q> ?z } UNION { ?x <r> ?u } UNION { ?x <s> ?v } } }");
    CHECK(match_exception_template(*c1) == TemplateId::T1_OptOverUnion);

    // case (2): constant-subject union branches sharing a fresh variable
    PatternPtr c2 = pat("{ ?x <p> <a> OPTIONAL { { <b> <q> ?y } UNION { <c> <r> ?y } } }");
    CHECK(match_exception_template(*c2) == TemplateId::T1_OptOverUnion);

    // case (3): one sharing branch, one fresh branch
    PatternPtr c3 = pat("{ ?x <p> <a> OPTIONAL { { ?x <q> ?y } UNION { ?z <r> <b> } } }");
    CHECK(match_exception_template(*c3) == TemplateId::T1_OptOverUnion);

    // case (4): a union branch reuses the optional ?y of the inner OPT
    PatternPtr c4 = pat(
        "{ { ?x <p> <q> OPTIONAL { ?y <q> <a> } } OPTIONAL "
        "{ { ?y <q> <b> } UNION { ?z <r> <c> } } }");
    CHECK(match_exception_template(*c4) == TemplateId::T2_OptOverUnionReuse);

    // unknown case (2): (() OPT (?x, p, a)) OPT (?x, q, b)
    PatternPtr u2 = pat("{ OPTIONAL { ?x <p> <a> } OPTIONAL { ?x <q> <b> } }");
    CHECK(match_exception_template(*u2) == TemplateId::T5_NestedOptReuse);

    // unknown case (1): langMatches over the OPT-introduced variable
    PatternPtr u1 = pat(
        "{ ?x <p> <a> OPTIONAL { ?x <q> ?y } FILTER (langMatches(lang(?y), \"en\")) }");
    CHECK(match_exception_template(*u1) == TemplateId::T3_LangMatchesFilter);

    // unknown case (3): negated bound
    PatternPtr u3 = pat("{ ?x <a> <b> OPTIONAL { ?x <c> ?y } FILTER (!bound(?y)) }");
    CHECK(match_exception_template(*u3) == TemplateId::T4_NegatedBoundFilter);
}

TEST_CASE("blocked-unf exception cases classify by template") {
    // cases (1)-(3): weakly monotonic via T1
    MonotonicityVerdict v1 = classify(
        "SELECT * WHERE { ?x <p> ?y OPTIONAL { { ?x <q> ?z } UNION { ?x <r> ?u } "
        "UNION { ?x <s> ?v } } }");
    CHECK(v1.cls == MonoClass::WeaklyMonotonic);
    CHECK(v1.rule == MonoRule::ExceptionTemplate);
    CHECK(v1.template_id == TemplateId::T1_OptOverUnion);

    MonotonicityVerdict v2 = classify(
        "SELECT * WHERE { ?x <p> <a> OPTIONAL { { <b> <q> ?y } UNION { <c> <r> ?y } } }");
    CHECK(v2.cls == MonoClass::WeaklyMonotonic);

    MonotonicityVerdict v3 = classify(
        "SELECT * WHERE { ?x <p> <a> OPTIONAL { { ?x <q> ?y } UNION { ?z <r> <b> } } }");
    CHECK(v3.cls == MonoClass::WeaklyMonotonic);

    // case (4): non-monotonic with replayable evidence
    MonotonicityVerdict v4 = classify(
        "SELECT * WHERE { { ?x <p> <q> OPTIONAL { ?y <q> <a> } } OPTIONAL "
        "{ { ?y <q> <b> } UNION { ?z <r> <c> } } }");
    CHECK(v4.cls == MonoClass::NonMonotonic);
    REQUIRE(v4.evidence.has_value());
    PatternPtr c4 = pat(
        "{ { ?x <p> <q> OPTIONAL { ?y <q> <a> } } OPTIONAL "
        "{ { ?y <q> <b> } UNION { ?z <r> <c> } } }");
    CHECK(verify_counterexample(*c4, MonoMode::Weak, *v4.evidence));
}

TEST_CASE("remaining unknown cases") {
    // (1) langMatches: monotone per the template (the oracle agrees)
    MonotonicityVerdict u1 = classify(
        "SELECT * WHERE { ?x <p> <a> OPTIONAL { ?x <q> ?y } "
        "FILTER (langMatches(lang(?y), \"en\")) }");
    CHECK(u1.cls == MonoClass::Monotonic);
    CHECK(u1.template_id == TemplateId::T3_LangMatchesFilter);

    // (2) (() OPT (?x,p,a)) OPT (?x,q,b): non-monotonic
    MonotonicityVerdict u2 =
        classify("SELECT * WHERE { OPTIONAL { ?x <p> <a> } OPTIONAL { ?x <q> <b> } }");
    CHECK(u2.cls == MonoClass::NonMonotonic);
    REQUIRE(u2.evidence.has_value());
    PatternPtr p2 = pat("{ OPTIONAL { ?x <p> <a> } OPTIONAL { ?x <q> <b> } }");
    CHECK(verify_counterexample(*p2, MonoMode::Weak, *u2.evidence));

    // (3) negated bound: non-monotonic
    MonotonicityVerdict u3 = classify(
        "SELECT * WHERE { ?x <a> <b> OPTIONAL { ?x <c> ?y } FILTER (!bound(?y)) }");
    CHECK(u3.cls == MonoClass::NonMonotonic);
    CHECK(u3.template_id == TemplateId::T4_NegatedBoundFilter);

    // (4) ((?x,a,b) OPT (?y,c,d)) OPT (?y,d,e): non-monotonic
    MonotonicityVerdict u4 = classify(
        "SELECT * WHERE { { ?x <a> <b> OPTIONAL { ?y <c> <d> } } OPTIONAL { ?y <d> <e> } }");
    CHECK(u4.cls == MonoClass::NonMonotonic);
    CHECK(u4.template_id == TemplateId::T5_NestedOptReuse);
    REQUIRE(u4.evidence.has_value());

    // (5) ((?x,p,?y) OPT (?y,q,?z)) FILTER (!bound(?z) || ?x = a)
    MonotonicityVerdict u5 = classify(
        "SELECT * WHERE { ?x <p> ?y OPTIONAL { ?y <q> ?z } "
        "FILTER (!bound(?z) || ?x = <a>) }");
    CHECK(u5.cls == MonoClass::NonMonotonic);
    CHECK(u5.template_id == TemplateId::T4_NegatedBoundFilter);
    REQUIRE(u5.evidence.has_value());
}

TEST_CASE("unsafe queries default to monotonic when nothing else decides") {
    MonotonicityVerdict v = classify(
        "SELECT * WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } FILTER bound(?w) }", true);
    CHECK(v.cls == MonoClass::Monotonic);
    CHECK(v.rule == MonoRule::UnsafeDefault);
}

TEST_CASE("honest unknown without the oracle") {
    // not UNF-rewritable (union under an OPT right side whose left is itself
    // an OPT), fresh branch variables: matches no template, oracle off
    MonotonicityVerdict v = classify(
        "SELECT * WHERE { { ?x <p> ?y OPTIONAL { ?x <q> ?z } } OPTIONAL "
        "{ { ?x <r> ?u } UNION { ?x <s> ?v } } }");
    CHECK(v.cls == MonoClass::Unknown);
    CHECK(v.rule == MonoRule::None);
}

TEST_CASE("union of well-designed branches is weakly monotonic") {
    MonotonicityVerdict v = classify(
        "SELECT * WHERE { { ?x <p> ?y OPTIONAL { ?x <q> ?z } } UNION "
        "{ ?x <r> ?y OPTIONAL { ?x <s> ?w } } }");
    CHECK(v.cls == MonoClass::WeaklyMonotonic);
    CHECK(v.rule == MonoRule::AllBranchesWellDesigned);
}
