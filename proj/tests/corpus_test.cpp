#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sparqlstat/corpus.hpp"

using namespace sparqlstat;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sparqlstat_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        auto p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

}  // namespace

TEST_CASE("ingest collapses duplicates with multiplicities") {
    TempDir tmp;
    std::string path = tmp.file("log.txt",
                                "SELECT ?x WHERE { ?x <p> ?y }\n"
                                "SELECT ?y WHERE { ?y <q> ?z }\n"
                                "SELECT  ?x   WHERE { ?x <p> ?y }\n");
    auto queries = ingest(path);
    REQUIRE(queries.size() == 2);
    CHECK(queries[0].multiplicity == 2);  // whitespace-normalized duplicate
    CHECK(queries[1].multiplicity == 1);
}

TEST_CASE("ingest reads directories one query per file") {
    TempDir tmp;
    tmp.file("a.rq", "SELECT ?x WHERE { ?x <p> ?y }");
    tmp.file("b.rq", "SELECT ?y\nWHERE { ?y <q> ?z }");
    auto queries = ingest(tmp.path.string());
    REQUIRE(queries.size() == 2);
    CHECK(queries[1].text == "SELECT ?y WHERE { ?y <q> ?z }");
}

TEST_CASE("ingest decodes url-encoded lines") {
    TempDir tmp;
    std::string path = tmp.file(
        "enc.txt", "SELECT%20%3Fx%20WHERE%20%7B%20%3Fx%20%3Cp%3E%20%3Fy%20%7D\n");
    auto queries = ingest(path);
    REQUIRE(queries.size() == 1);
    CHECK(queries[0].text == "SELECT ?x WHERE { ?x <p> ?y }");
}

TEST_CASE("analyze_one produces the expected feature vector") {
    AnalysisRecord r = analyze_one("SELECT ?x WHERE { ?x <p> ?y }");
    CHECK(r.parsed());
    CHECK(r.triple_count == 1);
    CHECK(r.fragment == "none");
    CHECK(r.safe);
    CHECK(r.wd.status == WdStatus::WellDesigned);
    CHECK(r.mono.cls == MonoClass::Monotonic);
    CHECK(r.mono.rule == MonoRule::OptFree);
    CHECK(r.sat.status == SatStatus::Satisfiable);
    CHECK(r.sat.rule == SatRule::FilterFree);

    AnalysisRecord bad = analyze_one("ASK { ?x <p> ?y }");
    CHECK_FALSE(bad.parsed());
    CHECK(bad.parse_status == "NonSelectForm");

    // the flagship pattern lands in the weakly monotonic bucket
    AnalysisRecord flag = analyze_one("SELECT * WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } }");
    CHECK(flag.mono.cls == MonoClass::WeaklyMonotonic);
}

TEST_CASE("aggregate and merge behave like a commutative monoid") {
    std::vector<RawQuery> queries = {
        {"SELECT ?x WHERE { ?x <p> ?y }", 3},
        {"SELECT * WHERE { ?x <p> ?y OPTIONAL { ?x <q> ?z } }", 1},
        {"SELECT * WHERE { ?a <p> ?b . ?b <q> ?c }", 1},
        {"ASK { ?x <p> ?y }", 2},
    };
    auto records = analyze_corpus(queries, {}, 1);
    CorpusReport whole = aggregate(records);
    CHECK(whole.total_texts == 7);
    CHECK(whole.unique_queries == 4);
    CHECK(whole.parse_ok == 3);
    CHECK(whole.triple_histogram.at(1) == 1);
    CHECK(whole.triple_histogram.at(2) == 2);

    CorpusReport left = aggregate({records[0], records[1]});
    CorpusReport right = aggregate({records[2], records[3]});
    CHECK(report_to_json(merge(left, right)) == report_to_json(whole));
    CHECK(report_to_json(merge(right, left)) == report_to_json(whole));

    CorpusReport zero = aggregate({});
    CHECK(zero.total_texts == 0);
    CHECK(report_to_json(merge(whole, zero)) == report_to_json(whole));

    // determinism across worker counts
    auto records8 = analyze_corpus(queries, {}, 8);
    CHECK(report_to_json(aggregate(records8)) == report_to_json(whole));
}

TEST_CASE("records of unparseable queries carry no downstream fields") {
    AnalysisRecord r = analyze_one("SELECT ?x WHERE { ?x <p> }");
    CHECK(r.parse_status == "SyntaxError");
    std::string line = record_to_json(r);
    CHECK(line.find("fragment") == std::string::npos);
    CHECK(line.find("monotonicity") == std::string::npos);
}

TEST_CASE("csv exports carry the two headline distributions") {
    std::vector<RawQuery> queries = {
        {"SELECT ?x WHERE { ?x <p> ?y }", 1},
        {"SELECT * WHERE { ?a <p> ?b . ?b <q> ?c }", 1},
    };
    CorpusReport report = aggregate(analyze_corpus(queries, {}, 1));
    std::string hist = histogram_csv(report);
    CHECK(hist.find("triples,queries,share") == 0);
    CHECK(hist.find("1,1,50.00") != std::string::npos);
    std::string frags = fragments_csv(report);
    CHECK(frags.find("none,1,50.00") != std::string::npos);
    CHECK(frags.find("A,1,50.00") != std::string::npos);
}
