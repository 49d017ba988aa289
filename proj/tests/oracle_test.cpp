#include "doctest.h"

#include "sparqlstat/oracle.hpp"
#include "support/helpers.hpp"

using namespace sparqlstat;
using sparqlstat::testing::pat;

TEST_CASE("triple patterns admit no counterexample in either mode") {
    PatternPtr p = pat("{ ?x <p> ?y }");
    CHECK(search_monotonicity_counterexample(*p, MonoMode::Plain).status ==
          SearchStatus::NoneWithinBudget);
    CHECK(search_monotonicity_counterexample(*p, MonoMode::Weak).status ==
          SearchStatus::NoneWithinBudget);
}

TEST_CASE("the flagship pattern splits the two modes") {
    PatternPtr p = pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    MonoSearchResult plain = search_monotonicity_counterexample(*p, MonoMode::Plain);
    REQUIRE(plain.status == SearchStatus::Found);
    REQUIRE(plain.counterexample.has_value());
    CHECK(verify_counterexample(*p, MonoMode::Plain, *plain.counterexample));
    CHECK(plain.counterexample->g2.size() == plain.counterexample->g1.size() + 1);

    CHECK(search_monotonicity_counterexample(*p, MonoMode::Weak).status ==
          SearchStatus::NoneWithinBudget);
}

TEST_CASE("negated-bound filters break weak monotonicity") {
    // ((?x, a, b) OPT (?x, c, ?y)) FILTER !bound(?y)
    PatternPtr p = pat("{ ?x <a> <b> OPTIONAL { ?x <c> ?y } FILTER (!bound(?y)) }");
    MonoSearchResult weak = search_monotonicity_counterexample(*p, MonoMode::Weak);
    REQUIRE(weak.status == SearchStatus::Found);
    CHECK(verify_counterexample(*p, MonoMode::Weak, *weak.counterexample));
    // the witness mapping binds ?x only
    CHECK(weak.counterexample->witness.size() == 1);
    CHECK(weak.counterexample->witness.count("x") == 1);
}

TEST_CASE("budget exhaustion is explicit") {
    PatternPtr p = pat("{ ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    OracleBudget tiny;
    tiny.max_checks = 1;
    CHECK(search_monotonicity_counterexample(*p, MonoMode::Plain, tiny).status ==
          SearchStatus::BudgetExceeded);
    OracleBudget tiny_pool;
    tiny_pool.max_pool = 1;
    CHECK(search_monotonicity_counterexample(*p, MonoMode::Plain, tiny_pool).status ==
          SearchStatus::BudgetExceeded);
}

TEST_CASE("brute-force satisfiability finds witnesses") {
    SatSearchResult r = brute_force_satisfiable(*pat("{ ?x <p> ?y }"));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.witness->default_graph.size() == 1);

    SatSearchResult eq =
        brute_force_satisfiable(*pat("{ ?x <p> ?y FILTER (?x = <a>) }"));
    REQUIRE(eq.status == SearchStatus::Found);
    CHECK(eq.witness->default_graph[0][0] == Term::iri("a"));
}

TEST_CASE("type-clash filters are conclusively unsatisfiable") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (isIRI(?x) && isLiteral(?x)) }");
    SatSearchResult r = brute_force_satisfiable(*p);
    CHECK(r.status == SearchStatus::NoneWithinBudget);
    CHECK(r.exhaustive);
}

TEST_CASE("opt-avoiding witnesses come from the subset phase") {
    // ((?x, a, b) OPT (?y, c, d)) FILTER !bound(?y): satisfiable by a graph
    // with no (·, c, d) triple
    PatternPtr p = pat("{ ?x <a> <b> OPTIONAL { ?y <c> <d> } FILTER (!bound(?y)) }");
    SatSearchResult r = brute_force_satisfiable(*p);
    REQUIRE(r.status == SearchStatus::Found);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->default_graph.size() == 1);
    CHECK(r.witness->default_graph[0][1] == Term::iri("a"));
    CHECK(!eval_pattern(*p, *r.witness).empty());
}

TEST_CASE("blank-node witnesses exist for isBlank") {
    SatSearchResult r = brute_force_satisfiable(*pat("{ ?x <p> ?y FILTER (isBlank(?y)) }"));
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.witness->default_graph[0][2].is_blank());
}

TEST_CASE("positive bound over an unbindable variable has no witness") {
    PatternPtr p = pat("{ ?x <a> <b> FILTER bound(?y) }");
    SatSearchResult r = brute_force_satisfiable(*p);
    CHECK(r.status == SearchStatus::NoneWithinBudget);
    CHECK(r.exhaustive);  // OPT-free, bound/type vocabulary only
}
