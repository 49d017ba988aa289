#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sparqlstat/corpus.hpp"
#include "sparqlstat/eval.hpp"
#include "sparqlstat/parse.hpp"
#include "sparqlstat/serialize.hpp"

namespace {

using namespace sparqlstat;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInvariant = 3;

unsigned workers_from_env() {
    const char* env = std::getenv("SPARQLSTAT_WORKERS");
    if (!env) return 1;
    long n = std::strtol(env, nullptr, 10);
    return n > 0 ? static_cast<unsigned>(n) : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string mapping_to_line(const Mapping& m) {
    if (m.empty()) return "{}";
    std::string out;
    for (const auto& [v, t] : m) {
        if (!out.empty()) out += " ";
        out += "?" + v + "=" + term_to_sparql(t);
    }
    return out;
}

int run_analyze(const std::string& path, const std::string& jsonl_out, bool oracle,
                const std::string& ref_path, unsigned workers) {
    AnalysisOptions opts;
    opts.oracle = oracle;
    if (!ref_path.empty()) opts.reference = load_dataset_file(ref_path);
    std::vector<RawQuery> queries = ingest(path);
    std::vector<AnalysisRecord> records = analyze_corpus(queries, opts, workers);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!jsonl_out.empty()) {
        file.open(jsonl_out, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + jsonl_out);
        out = &file;
    }
    for (const auto& r : records) (*out) << record_to_json(r) << "\n";
    return kExitOk;
}

int run_stats(const std::string& path, const std::string& report_out,
              const std::string& csv_dir, bool oracle, unsigned workers) {
    AnalysisOptions opts;
    opts.oracle = oracle;
    std::vector<RawQuery> queries = ingest(path);
    std::vector<AnalysisRecord> records = analyze_corpus(queries, opts, workers);
    CorpusReport report = aggregate(records);
    std::string json = report_to_json(report);
    if (report_out.empty()) {
        std::cout << json;
    } else {
        write_file(report_out, json);
    }
    if (!csv_dir.empty()) {
        std::filesystem::create_directories(csv_dir);
        write_file(csv_dir + "/triple_histogram.csv", histogram_csv(report));
        write_file(csv_dir + "/fragments.csv", fragments_csv(report));
    }
    return kExitOk;
}

int run_check(const std::string& query_arg, const std::string& feature, bool oracle,
              const std::string& ref_path) {
    std::string text = query_arg;
    std::error_code ec;
    if (std::filesystem::is_regular_file(query_arg, ec)) text = read_file(query_arg);

    AnalysisOptions opts;
    opts.oracle = oracle;
    if (!ref_path.empty()) opts.reference = load_dataset_file(ref_path);
    AnalysisRecord rec = analyze_one(text, opts);
    if (!rec.parsed()) {
        std::cout << "parse: " << rec.parse_status << "\n";
        return kExitOk;
    }
    bool all = feature == "all";
    if (all) {
        std::cout << "triples: " << rec.triple_count << "\n";
        std::cout << "fragment: " << rec.fragment << "\n";
        std::cout << "safe: " << (rec.safe ? "yes" : "no") << "\n";
    }
    if (all || feature == "wd") {
        std::cout << "well-designed: " << to_string(rec.wd.status) << " ("
                  << to_string(rec.wd.reason) << ")";
        if (rec.wd.witness)
            std::cout << " witness ?" << rec.wd.witness->variable << " at "
                      << path_to_string(rec.wd.witness->subpattern);
        std::cout << "\n";
    }
    if (all || feature == "mono") {
        std::cout << "monotonicity: " << to_string(rec.mono.cls) << " ("
                  << to_string(rec.mono.rule);
        if (rec.mono.template_id) std::cout << " " << to_string(*rec.mono.template_id);
        std::cout << ")\n";
        if (rec.mono.evidence) {
            std::cout << "  counterexample g1:\n";
            std::cout << dataset_to_text(rec.mono.evidence->g1);
            std::cout << "  counterexample g2 adds:\n";
            std::cout << dataset_to_text(rec.mono.evidence->g2);
        }
    }
    if (all || feature == "sat") {
        std::cout << "satisfiability: " << to_string(rec.sat.status) << " ("
                  << to_string(rec.sat.rule) << ")";
        if (rec.sat.conflict)
            std::cout << " conflict {" << rec.sat.conflict->atom.key() << ", "
                      << rec.sat.conflict->complement.key() << "}";
        std::cout << "\n";
        if (rec.sat.witness && rec.sat.rule == SatRule::DatasetWitness &&
            !rec.sat.witness->default_graph.empty()) {
            std::cout << "  witness:\n" << dataset_to_text(*rec.sat.witness);
        }
    }
    if (rec.discrepancy) {
        std::cout << "discrepancy: " << rec.discrepancy->case_id << " published="
                  << rec.discrepancy->published_label << " derived=" << rec.discrepancy->derived
                  << "\n";
    }
    return kExitOk;
}

int run_eval(const std::string& query_file, const std::string& triples_file) {
    std::string text = read_file(query_file);
    ParseResult parsed = parse_query(text);
    if (auto* err = std::get_if<ParseError>(&parsed)) {
        std::cerr << "parse error: " << to_string(err->kind) << ": " << err->message
                  << "\n";
        return kExitUsage;
    }
    RdfDataset d = load_dataset_file(triples_file);
    MappingSet solutions = eval_query(std::get<Query>(parsed), d);
    for (const auto& m : solutions) std::cout << mapping_to_line(m) << "\n";
    std::cerr << solutions.size() << " solution(s)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Static analysis for SPARQL 1.0 SELECT queries"};
    app.require_subcommand(1);

    unsigned workers = workers_from_env();

    std::string analyze_path, analyze_jsonl, analyze_ref;
    bool analyze_oracle = false;
    auto* analyze = app.add_subcommand("analyze", "per-query feature records");
    analyze->add_option("path", analyze_path, "query log file or directory")->required();
    analyze->add_option("--jsonl", analyze_jsonl, "write records to this file");
    analyze->add_flag("--oracle", analyze_oracle, "enable oracle-backed stages");
    analyze->add_option("--ref-data", analyze_ref, "reference triples file");
    analyze->add_option("--workers", workers, "worker threads");

    std::string stats_path, stats_report, stats_csv;
    bool stats_oracle = false;
    auto* stats = app.add_subcommand("stats", "aggregate distribution report");
    stats->add_option("path", stats_path, "query log file or directory")->required();
    stats->add_option("--report", stats_report, "write the JSON report here");
    stats->add_option("--csv", stats_csv, "write CSV exports into this directory");
    stats->add_flag("--oracle", stats_oracle, "enable oracle-backed stages");
    stats->add_option("--workers", workers, "worker threads");

    std::string check_query, check_feature = "all", check_ref;
    bool check_oracle = false;
    auto* check = app.add_subcommand("check", "analyze one query");
    check->add_option("query", check_query, "query string or file")->required();
    check->add_option("--feature", check_feature, "wd|mono|sat|all")
        ->check(CLI::IsMember({"wd", "mono", "sat", "all"}));
    check->add_flag("--oracle", check_oracle, "enable oracle-backed stages");
    check->add_option("--ref-data", check_ref, "reference triples file");

    std::string eval_query_file, eval_triples;
    auto* eval = app.add_subcommand("eval", "evaluate a query over a triples file");
    eval->add_option("query-file", eval_query_file, "file with one SELECT query")->required();
    eval->add_option("triples-file", eval_triples, "line-based triples file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*analyze)
            return run_analyze(analyze_path, analyze_jsonl, analyze_oracle, analyze_ref,
                               workers);
        if (*stats) return run_stats(stats_path, stats_report, stats_csv, stats_oracle, workers);
        if (*check) return run_check(check_query, check_feature, check_oracle, check_ref);
        if (*eval) return run_eval(eval_query_file, eval_triples);
    } catch (const std::logic_error& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
