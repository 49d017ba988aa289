#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparqlstat/monotonicity.hpp"
#include "sparqlstat/satisfiability.hpp"

namespace sparqlstat {

// --- ingest -----------------------------------------------------------------

struct RawQuery {
    std::string text;               // decoded, whitespace-normalized
    std::uint64_t multiplicity = 1; // exact duplicates collapse
};

/// One query per line (URL-encoded or raw) from a file, or one query per
/// file from a directory. Duplicate texts after whitespace normalization
/// are emitted once with a multiplicity count. Throws std::runtime_error
/// on I/O failure; undecodable lines are skipped.
std::vector<RawQuery> ingest(const std::string& path);

std::string normalize_query_text(const std::string& text);
std::string query_id(const std::string& normalized_text);  // stable FNV-1a hash

// --- discrepancy log --------------------------------------------------------------

/// The three shapes whose published labels disagree with (or needed
/// deciding by) the formal semantics; matched structurally, modulo renaming.
struct DiscrepancyEntry {
    std::string case_id;      // "sat-negated-bound-opt", "sat-unbound-bound", "mono-langmatches"
    std::string published_label;
    std::string derived;      // verdict under the implemented semantics
    std::string witness;      // dataset text, conflict pair, or budget note
    std::uint64_t queries = 0;  // matching queries seen

    bool operator<(const DiscrepancyEntry& o) const { return case_id < o.case_id; }
};

std::optional<DiscrepancyEntry> match_discrepancy(const Pattern& body);

// --- per-query analysis --------------------------------------------------------

struct AnalysisOptions {
    bool oracle = false;  // enable the oracle-backed stages
    std::optional<RdfDataset> reference;
    OracleBudget budget;
};

struct AnalysisRecord {
    std::string id;
    std::uint64_t multiplicity = 1;
    std::string parse_status;  // "ok" or the ParseErrorKind name

    // the fields below are set when parse_status == "ok"
    std::size_t triple_count = 0;
    std::string fragment;
    bool safe = true;
    WdVerdict wd;
    MonotonicityVerdict mono;
    SatVerdict sat;
    std::optional<DiscrepancyEntry> discrepancy;

    double parse_ms = 0, analysis_ms = 0;

    bool parsed() const { return parse_status == "ok"; }
};

AnalysisRecord analyze_one(const std::string& text, const AnalysisOptions& opts = {});

/// Line-delimited JSON form of a record.
std::string record_to_json(const AnalysisRecord& r);

// --- aggregation -------------------------------------------------------------------

struct CorpusReport {
    std::uint64_t total_texts = 0;     // executions, duplicates included
    std::uint64_t unique_queries = 0;
    std::uint64_t parse_ok = 0;
    std::map<std::string, std::uint64_t> parse_errors;
    std::map<std::uint64_t, std::uint64_t> triple_histogram;
    std::map<std::string, std::uint64_t> fragments;
    std::map<std::string, std::uint64_t> wd_status;
    std::map<std::string, std::uint64_t> wd_reasons;
    std::map<std::string, std::uint64_t> mono_classes;
    std::map<std::string, std::uint64_t> mono_rules;
    std::map<std::string, std::uint64_t> sat_status;
    std::map<std::string, std::uint64_t> sat_rules;
    std::vector<DiscrepancyEntry> discrepancies;  // sorted by case_id
};

/// Folds one record into the report; throws std::logic_error when a
/// cross-feature consistency check fails.
void fold_record(CorpusReport& report, const AnalysisRecord& r);

CorpusReport aggregate(const std::vector<AnalysisRecord>& records);

/// Associative, commutative combination of partial reports.
CorpusReport merge(const CorpusReport& a, const CorpusReport& b);

/// Report-level consistency checks (monotone counts vs OPT-free counts,
/// percentage totals); throws std::logic_error on violation.
void validate_report(const CorpusReport& report);

std::string report_to_json(const CorpusReport& report);
std::string histogram_csv(const CorpusReport& report);
std::string fragments_csv(const CorpusReport& report);

// --- pipeline ------------------------------------------------------------------------

/// Analyzes every query with the given worker count (0 = hardware default);
/// records come back in input order regardless of the worker count.
std::vector<AnalysisRecord> analyze_corpus(const std::vector<RawQuery>& queries,
                                           const AnalysisOptions& opts,
                                           unsigned workers = 1);

}  // namespace sparqlstat
