#include "doctest.h"

#include "sparqlstat/parse.hpp"
#include "sparqlstat/serialize.hpp"
#include "support/helpers.hpp"

using namespace sparqlstat;
using sparqlstat::testing::body_of;
using sparqlstat::testing::must_parse;
using sparqlstat::testing::pat;

namespace {

ParseError expect_error(const std::string& text) {
    ParseResult r = parse_query(text);
    REQUIRE(std::holds_alternative<ParseError>(r));
    return std::get<ParseError>(r);
}

void check_roundtrip(const std::string& text) {
    Query q1 = must_parse(text);
    std::string out = serialize(q1);
    CAPTURE(text);
    CAPTURE(out);
    Query q2 = must_parse(out);
    CHECK(q1.equals(q2));
}

}  // namespace

TEST_CASE("minimal select query") {
    Query q = must_parse("SELECT ?x WHERE { ?x <p> ?y }");
    CHECK(q.projection == std::vector<std::string>{"x"});
    REQUIRE(q.body->kind == PatternKind::Triple);
    CHECK(q.body->triple.subject == Term::variable("x"));
    CHECK(q.body->triple.predicate == Term::iri("p"));
    CHECK(q.body->triple.object == Term::variable("y"));
}

TEST_CASE("non-select forms are rejected with a distinguished error") {
    CHECK(expect_error("ASK { ?x <p> ?y }").kind == ParseErrorKind::NonSelectForm);
    CHECK(expect_error("DESCRIBE <a>").kind == ParseErrorKind::NonSelectForm);
    CHECK(expect_error("CONSTRUCT { ?x <p> ?y } WHERE { ?x <p> ?y }").kind ==
          ParseErrorKind::NonSelectForm);
}

TEST_CASE("sparql 1.1 constructs are flagged") {
    CHECK(expect_error("SELECT ?x WHERE { ?x <p> ?y . BIND(1 AS ?z) }").kind ==
          ParseErrorKind::Unsupported11);
    CHECK(expect_error("SELECT ?x WHERE { ?x <p> ?y . SERVICE <s> { ?a <b> ?c } }").kind ==
          ParseErrorKind::Unsupported11);
    CHECK(expect_error("SELECT ?x WHERE { ?x <p> ?y MINUS { ?x <q> ?z } }").kind ==
          ParseErrorKind::Unsupported11);
    CHECK(expect_error("SELECT (COUNT(?x) AS ?c) WHERE { ?x <p> ?y }").kind ==
          ParseErrorKind::Unsupported11);
    CHECK(expect_error("SELECT ?x WHERE { { SELECT ?x WHERE { ?x <p> ?y } } }").kind ==
          ParseErrorKind::Unsupported11);
}

TEST_CASE("blank nodes in query text are syntax errors") {
    CHECK(expect_error("SELECT ?x WHERE { [] <p> ?x }").kind == ParseErrorKind::SyntaxError);
    CHECK(expect_error("SELECT ?x WHERE { [ <p> ?x ] <q> <a> }").kind ==
          ParseErrorKind::SyntaxError);
}

TEST_CASE("optional parses to an Opt node") {
    PatternPtr p = body_of("SELECT ?x WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    REQUIRE(p->kind == PatternKind::Opt);
    CHECK(p->left->kind == PatternKind::Triple);
    CHECK(p->right->kind == PatternKind::Triple);
}

TEST_CASE("leading optional left-joins against the unit pattern") {
    PatternPtr p = pat("{ OPTIONAL { ?x <p> <a> } OPTIONAL { ?x <q> <b> } }");
    REQUIRE(p->kind == PatternKind::Opt);
    CHECK(p->left->kind == PatternKind::Opt);
    CHECK(p->left->left->kind == PatternKind::Empty);
}

TEST_CASE("group assembly follows the left-associative algebra") {
    PatternPtr p = pat("{ ?a <p> ?b . ?b <q> ?c OPTIONAL { ?c <r> ?d } }");
    REQUIRE(p->kind == PatternKind::Opt);
    CHECK(p->left->kind == PatternKind::And);

    // a filter anywhere in the group applies to the whole group
    PatternPtr f = pat("{ ?a <p> ?b FILTER (?b = 1) . ?b <q> ?c }");
    REQUIRE(f->kind == PatternKind::Filter);
    CHECK(f->left->kind == PatternKind::And);
}

TEST_CASE("union chains are left-associative") {
    PatternPtr p = pat("{ { ?a <p> ?b } UNION { ?a <q> ?b } UNION { ?a <r> ?b } }");
    REQUIRE(p->kind == PatternKind::Union);
    CHECK(p->left->kind == PatternKind::Union);
    CHECK(p->right->kind == PatternKind::Triple);
}

TEST_CASE("prefixes expand and 'a' is rdf:type") {
    Query q = must_parse(
        "PREFIX foaf: <http://xmlns.com/foaf/0.1/> "
        "SELECT ?x WHERE { ?x a foaf:Person }");
    REQUIRE(q.body->kind == PatternKind::Triple);
    CHECK(q.body->triple.predicate ==
          Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"));
    CHECK(q.body->triple.object == Term::iri("http://xmlns.com/foaf/0.1/Person"));
}

TEST_CASE("numeric literals are canonicalized at parse time") {
    PatternPtr a = pat("{ ?x <p> 5.0 }");
    PatternPtr b = pat("{ ?x <p> 5 }");
    PatternPtr c = pat("{ ?x <p> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> }");
    CHECK(a->equals(*b));
    CHECK(b->equals(*c));
    PatternPtr d = pat("{ ?x <p> 00.50 }");
    CHECK(d->triple.object.lexical == "0.5");
}

TEST_CASE("select star expands to the pattern variables") {
    Query q = must_parse("SELECT * WHERE { ?b <p> ?a OPTIONAL { ?b <q> ?c } }");
    CHECK(q.projection == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("distinct and solution modifiers are tolerated") {
    Query q = must_parse(
        "SELECT DISTINCT ?x WHERE { ?x <p> ?y } ORDER BY DESC(?y) LIMIT 10 OFFSET 5");
    CHECK(q.projection == std::vector<std::string>{"x"});
}

TEST_CASE("filters map onto the constraint vocabulary") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (?x != ?z && ?y = <c>) }");
    REQUIRE(p->kind == PatternKind::Filter);
    const Constraint& c = *p->condition;
    REQUIRE(c.kind == ConstraintKind::And);
    CHECK(c.left->atom.kind == AtomKind::EqVar);
    CHECK(c.left->atom.negated);
    CHECK(c.right->atom.kind == AtomKind::EqConst);
    CHECK_FALSE(c.right->atom.negated);

    PatternPtr q = pat("{ ?x <p> ?y FILTER (!bound(?y) || ?x > 3) }");
    const Constraint& qc = *q->condition;
    REQUIRE(qc.kind == ConstraintKind::Or);
    CHECK(qc.left->atom.kind == AtomKind::Bound);
    CHECK(qc.left->atom.negated);
    CHECK(qc.right->atom.kind == AtomKind::GtConst);
}

TEST_CASE("constant-on-the-left comparisons are normalized") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (3 < ?y) }");
    CHECK(p->condition->atom.kind == AtomKind::GtConst);
    CHECK(p->condition->atom.var == "y");
}

TEST_CASE("unknown function calls survive as opaque atoms") {
    PatternPtr p = pat("{ ?x <p> ?y FILTER (sameTerm(?x, ?y)) }");
    REQUIRE(p->condition->kind == ConstraintKind::Atomic);
    CHECK(p->condition->atom.kind == AtomKind::Opaque);
    CHECK(p->condition->atom.variables() == std::set<std::string>{"x", "y"});
    CHECK_FALSE(p->condition->built_in_only());
}

TEST_CASE("round trips") {
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?y }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    check_roundtrip("SELECT ?x ?y WHERE { { ?x <p> ?y } UNION { ?x <q> ?y } UNION {} }");
    check_roundtrip("SELECT * WHERE { GRAPH ?g { ?x <p> ?y } . GRAPH <g2> { ?x <q> ?z } }");
    check_roundtrip(
        "SELECT ?x WHERE { ?x <p> ?y FILTER (str(?x) = \"v\" || "
        "langMatches(lang(?y), \"en\")) }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> \"lit\"@en ; <q> \"x\\\"y\" , 4.25 }");
    check_roundtrip("SELECT ?x WHERE { OPTIONAL { ?x <p> <a> } OPTIONAL { ?x <q> <b> } }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?y FILTER (!(isIRI(?x) && ?y < 3)) }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?y FILTER (regex(str(?x), \"^ab.*\")) }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?y FILTER (sameTerm(?x, ?y) || bound(?y)) }");
    check_roundtrip("SELECT ?x WHERE { ?x <p> ?o . { {} OPTIONAL { ?o <q> ?w } } }");
}

TEST_CASE("serialize of the unit pattern is the empty group") {
    PatternPtr e = Pattern::empty();
    CHECK(serialize_pattern(*e) == "{}");
}

TEST_CASE("count_triple_patterns") {
    CHECK(count_triple_patterns(*pat("{ ?x <p> ?y }")) == 1);
    CHECK(count_triple_patterns(*pat("{ ?x <p> ?y . ?y <q> ?z . ?z <r> ?u }")) == 3);
    CHECK(count_triple_patterns(*Pattern::empty()) == 0);
    // additivity over operators, filters and graphs preserve the count
    CHECK(count_triple_patterns(
              *pat("{ { ?a <p> ?b } UNION { GRAPH ?g { ?a <q> ?b . ?b <r> ?c } } }")) == 3);
}

TEST_CASE("fragment signatures") {
    CHECK(fragment_signature(*pat("{ ?x <p> ?y }")).to_string() == "none");
    CHECK(fragment_signature(*pat("{ ?x <p> ?y . ?y <q> ?z OPTIONAL { ?z <r> ?u } }"))
              .to_string() == "AO");
    CHECK(fragment_signature(
              *pat("{ GRAPH <g> { ?x <p> ?y OPTIONAL { ?x <q> ?z } } FILTER bound(?x) }"))
              .to_string() == "FGO");
    CHECK(FragmentSignature::from_string("none") == FragmentSignature{});
}

TEST_CASE("pattern and constraint variables") {
    CHECK(pattern_vars(*pat("{ ?x <p> ?y }")) == std::set<std::string>{"x", "y"});
    CHECK(pattern_vars(*Pattern::empty()).empty());

    PatternPtr f = pat("{ ?x <p> ?y FILTER (?x != ?z && ?y = <c>) }");
    CHECK(constraint_vars(*f->condition) == std::set<std::string>{"x", "y", "z"});
    // filter variables are not pattern variables ...
    CHECK(pattern_vars(*f) == std::set<std::string>{"x", "y"});
    // ... but they are occurrence variables
    CHECK(occurrence_vars(*f) == std::set<std::string>{"x", "y", "z"});

    PatternPtr g = pat("{ GRAPH ?g { ?x <p> ?y } }");
    CHECK(pattern_vars(*g) == std::set<std::string>{"g", "x", "y"});
}

TEST_CASE("url-decoded and messy real-world shapes parse") {
    CHECK(parse_ok(parse_query(
        "PREFIX rdfs: <http://www.w3.org/2000/01/rdf-schema#>\n"
        "SELECT ?l WHERE { <http://dbpedia.org/resource/Berlin> rdfs:label ?l "
        "FILTER (langMatches(lang(?l), 'en')) }")));
    CHECK(parse_ok(parse_query("SELECT $x WHERE { $x <p> 'quoted' }")));
    CHECK(parse_ok(parse_query("# comment\nSELECT ?x WHERE { ?x <p> ?y . } # trailing")));
    CHECK(parse_ok(parse_query(
        "BASE <http://example.org/> SELECT ?x WHERE { ?x <rel> <other> }")));
}
