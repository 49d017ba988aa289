#include "sparqlstat/corpus.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sparqlstat/parse.hpp"
#include "sparqlstat/serialize.hpp"

namespace sparqlstat {

namespace fs = std::filesystem;
using nlohmann::json;

// --- ingest ---------------------------------------------------------------------

std::string normalize_query_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // trims leading whitespace
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string query_id(const std::string& normalized_text) {
    // FNV-1a, 64 bit: stable across runs and platforms
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : normalized_text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// URL-decoding for log lines that carry no raw whitespace
std::optional<std::string> url_decode(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%') {
            if (i + 2 >= s.size()) return std::nullopt;
            int hi = hex_value(s[i + 1]);
            int lo = hex_value(s[i + 2]);
            if (hi < 0 || lo < 0) return std::nullopt;
            out.push_back(static_cast<char>(hi * 16 + lo));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

void push_text(std::vector<RawQuery>& out, std::map<std::string, std::size_t>& seen,
               const std::string& raw) {
    std::string text = raw;
    // decoded form: the line has percent escapes and no literal whitespace
    if (text.find('%') != std::string::npos &&
        text.find(' ') == std::string::npos && text.find('\t') == std::string::npos) {
        if (auto decoded = url_decode(text)) {
            text = *decoded;
        } else {
            std::cerr << "sparqlstat: skipping undecodable line\n";
            return;
        }
    }
    text = normalize_query_text(text);
    if (text.empty()) return;
    auto it = seen.find(text);
    if (it != seen.end()) {
        ++out[it->second].multiplicity;
        return;
    }
    seen.emplace(text, out.size());
    out.push_back(RawQuery{text, 1});
}

}  // namespace

std::vector<RawQuery> ingest(const std::string& path) {
    std::vector<RawQuery> out;
    std::map<std::string, std::size_t> seen;
    fs::path p(path);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open " + f.string());
            std::ostringstream buf;
            buf << in.rdbuf();
            push_text(out, seen, buf.str());
        }
        return out;
    }
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        push_text(out, seen, line);
    }
    return out;
}

// --- discrepancy templates ----------------------------------------------------------

namespace {

bool var_const_const(const Pattern& p) {
    return p.kind == PatternKind::Triple && p.triple.subject.is_variable() &&
           p.triple.predicate.is_constant() && p.triple.object.is_constant();
}

// ((?x, a, b) OPT (?y, c, d)) FILTER ¬bound(?y): labeled unsatisfiable in
// the source statistics, satisfiable under the formal semantics.
bool d1_shape(const Pattern& body) {
    if (body.kind != PatternKind::Filter) return false;
    const Constraint& c = *body.condition;
    if (c.kind != ConstraintKind::Atomic || c.atom.kind != AtomKind::Bound || !c.atom.negated)
        return false;
    const Pattern& opt = *body.left;
    if (opt.kind != PatternKind::Opt) return false;
    if (!var_const_const(*opt.left) || !var_const_const(*opt.right)) return false;
    const std::string& y = opt.right->triple.subject.lexical;
    return c.atom.var == y && opt.left->triple.subject.lexical != y;
}

// (?x, a, b) FILTER bound(?y): labeled satisfiable, unsatisfiable under the
// formal semantics since ?y can never be bound.
bool d2_shape(const Pattern& body) {
    if (body.kind != PatternKind::Filter) return false;
    const Constraint& c = *body.condition;
    if (c.kind != ConstraintKind::Atomic || c.atom.kind != AtomKind::Bound || c.atom.negated)
        return false;
    if (!var_const_const(*body.left)) return false;
    return c.atom.var != body.left->triple.subject.lexical;
}

// ((?x, p, a) OPT (?x, q, ?y)) FILTER langMatches(lang(?y), c): labeled
// "montone"; the toolkit decides by template and oracle.
bool d3_shape(const Pattern& body) {
    if (body.kind != PatternKind::Filter) return false;
    const Constraint& c = *body.condition;
    if (c.kind != ConstraintKind::Atomic || c.atom.kind != AtomKind::LangMatches ||
        c.atom.negated)
        return false;
    const Pattern& opt = *body.left;
    if (opt.kind != PatternKind::Opt) return false;
    if (!var_const_const(*opt.left)) return false;
    const Pattern& r = *opt.right;
    if (r.kind != PatternKind::Triple || !r.triple.subject.is_variable() ||
        !r.triple.predicate.is_constant() || !r.triple.object.is_variable())
        return false;
    if (r.triple.subject.lexical != opt.left->triple.subject.lexical) return false;
    return c.atom.var == r.triple.object.lexical;
}

std::string one_line(std::string text) {
    for (auto& c : text)
        if (c == '\n') c = ' ';
    while (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

}  // namespace

std::optional<DiscrepancyEntry> match_discrepancy(const Pattern& body) {
    if (d1_shape(body)) {
        DiscrepancyEntry e;
        e.case_id = "sat-negated-bound-opt";
        e.published_label = "unsatisfiable";
        SatSearchResult r = brute_force_satisfiable(body);
        if (r.status == SearchStatus::Found) {
            e.derived = "Satisfiable";
            e.witness = one_line(dataset_to_text(*r.witness));
        } else {
            e.derived = "Unresolved";
            e.witness = "no witness within the default budget";
        }
        e.queries = 1;
        return e;
    }
    if (d2_shape(body)) {
        DiscrepancyEntry e;
        e.case_id = "sat-unbindable-bound";
        e.published_label = "satisfiable";
        e.derived = "Unsatisfiable";
        e.witness = "bound() over a variable the pattern never binds is always false";
        e.queries = 1;
        return e;
    }
    if (d3_shape(body)) {
        DiscrepancyEntry e;
        e.case_id = "mono-langmatches-filter";
        e.published_label = "montone";
        MonoSearchResult weak = search_monotonicity_counterexample(body, MonoMode::Weak);
        if (weak.status == SearchStatus::Found) {
            e.derived = "NonMonotonic";
            e.witness = one_line(dataset_to_text(weak.counterexample->g2));
        } else {
            e.derived = "Monotonic";
            e.witness = "no weak-monotonicity counterexample at the default budget";
        }
        e.queries = 1;
        return e;
    }
    return std::nullopt;
}

// --- per-query analysis ----------------------------------------------------------------

AnalysisRecord analyze_one(const std::string& text, const AnalysisOptions& opts) {
    using clock = std::chrono::steady_clock;
    AnalysisRecord rec;
    std::string normalized = normalize_query_text(text);
    rec.id = query_id(normalized);

    auto t0 = clock::now();
    ParseResult parsed = parse_query(normalized);
    auto t1 = clock::now();
    rec.parse_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (auto* err = std::get_if<ParseError>(&parsed)) {
        rec.parse_status = to_string(err->kind);
        return rec;
    }
    rec.parse_status = "ok";
    const Query& q = std::get<Query>(parsed);

    rec.triple_count = count_triple_patterns(*q.body);
    rec.fragment = fragment_signature(*q.body).to_string();
    rec.safe = is_safe(*q.body).safe;
    rec.wd = is_well_designed(q);

    MonoOptions mono_opts;
    mono_opts.use_oracle = opts.oracle;
    mono_opts.budget = opts.budget;
    rec.mono = classify_monotonicity(q, mono_opts);

    SatOptions sat_opts;
    sat_opts.use_oracle = opts.oracle;
    sat_opts.pool_heuristics = opts.oracle;
    sat_opts.budget = opts.budget;
    rec.sat = check_satisfiability(q, opts.reference ? &*opts.reference : nullptr, sat_opts);
    rec.discrepancy = match_discrepancy(*q.body);

    rec.analysis_ms =
        std::chrono::duration<double, std::milli>(clock::now() - t1).count();
    return rec;
}

std::string record_to_json(const AnalysisRecord& r) {
    json j;
    j["id"] = r.id;
    j["multiplicity"] = r.multiplicity;
    j["parse"] = r.parse_status;
    if (r.parsed()) {
        j["triples"] = r.triple_count;
        j["fragment"] = r.fragment;
        j["safe"] = r.safe;
        j["wd"] = {{"status", to_string(r.wd.status)}, {"reason", to_string(r.wd.reason)}};
        if (r.wd.witness) {
            j["wd"]["witness"] = {{"path", path_to_string(r.wd.witness->subpattern)},
                                  {"variable", r.wd.witness->variable}};
        }
        j["monotonicity"] = {{"class", to_string(r.mono.cls)},
                             {"rule", to_string(r.mono.rule)}};
        if (r.mono.template_id)
            j["monotonicity"]["template"] = to_string(*r.mono.template_id);
        if (r.mono.evidence) {
            j["monotonicity"]["evidence"] = {
                {"g1", dataset_to_text(r.mono.evidence->g1)},
                {"g2", dataset_to_text(r.mono.evidence->g2)},
            };
        }
        j["satisfiability"] = {{"status", to_string(r.sat.status)},
                               {"rule", to_string(r.sat.rule)}};
        if (r.sat.conflict) {
            j["satisfiability"]["conflict"] = {
                {"atom", r.sat.conflict->atom.key()},
                {"complement", r.sat.conflict->complement.key()}};
        }
        j["timing_ms"] = {{"parse", r.parse_ms}, {"analysis", r.analysis_ms}};
    }
    return j.dump();
}

// --- aggregation ---------------------------------------------------------------------------

namespace {

void merge_counts(std::map<std::string, std::uint64_t>& into,
                  const std::map<std::string, std::uint64_t>& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

void merge_discrepancies(std::vector<DiscrepancyEntry>& into,
                         const std::vector<DiscrepancyEntry>& from) {
    for (const auto& e : from) {
        bool found = false;
        for (auto& mine : into) {
            if (mine.case_id == e.case_id) {
                mine.queries += e.queries;
                found = true;
                break;
            }
        }
        if (!found) into.push_back(e);
    }
    std::sort(into.begin(), into.end());
}

}  // namespace

void fold_record(CorpusReport& report, const AnalysisRecord& r) {
    report.total_texts += r.multiplicity;
    report.unique_queries += 1;
    if (!r.parsed()) {
        ++report.parse_errors[r.parse_status];
        return;
    }
    ++report.parse_ok;
    ++report.triple_histogram[r.triple_count];
    ++report.fragments[r.fragment];
    ++report.wd_status[to_string(r.wd.status)];
    ++report.wd_reasons[to_string(r.wd.reason)];
    ++report.mono_classes[to_string(r.mono.cls)];
    ++report.mono_rules[to_string(r.mono.rule)];
    ++report.sat_status[to_string(r.sat.status)];
    ++report.sat_rules[to_string(r.sat.rule)];
    if (r.discrepancy) merge_discrepancies(report.discrepancies, {*r.discrepancy});

    // cross-feature consistency
    if (r.wd.reason == WdReason::OptConditionViolated &&
        r.fragment.find('O') == std::string::npos)
        throw std::logic_error("OptConditionViolated on an OPT-free query " + r.id);
    if (r.sat.status == SatStatus::Unsatisfiable && r.sat.rule == SatRule::DatasetWitness)
        throw std::logic_error("unsatisfiable verdict carrying a dataset witness " + r.id);
    if (r.mono.cls == MonoClass::NonMonotonic && !r.mono.evidence)
        throw std::logic_error("non-monotonic verdict without evidence " + r.id);
    if (r.wd.status == WdStatus::WellDesigned &&
        !(r.mono.cls == MonoClass::Monotonic || r.mono.cls == MonoClass::WeaklyMonotonic))
        throw std::logic_error("well-designed query outside the weakly monotonic classes " +
                               r.id);
}

CorpusReport aggregate(const std::vector<AnalysisRecord>& records) {
    CorpusReport report;
    for (const auto& r : records) fold_record(report, r);
    validate_report(report);
    return report;
}

CorpusReport merge(const CorpusReport& a, const CorpusReport& b) {
    CorpusReport out = a;
    out.total_texts += b.total_texts;
    out.unique_queries += b.unique_queries;
    out.parse_ok += b.parse_ok;
    merge_counts(out.parse_errors, b.parse_errors);
    for (const auto& [k, v] : b.triple_histogram) out.triple_histogram[k] += v;
    merge_counts(out.fragments, b.fragments);
    merge_counts(out.wd_status, b.wd_status);
    merge_counts(out.wd_reasons, b.wd_reasons);
    merge_counts(out.mono_classes, b.mono_classes);
    merge_counts(out.mono_rules, b.mono_rules);
    merge_counts(out.sat_status, b.sat_status);
    merge_counts(out.sat_rules, b.sat_rules);
    merge_discrepancies(out.discrepancies, b.discrepancies);
    return out;
}

void validate_report(const CorpusReport& report) {
    auto sum = [](const std::map<std::string, std::uint64_t>& m) {
        std::uint64_t s = 0;
        for (const auto& [k, v] : m) s += v;
        return s;
    };
    if (sum(report.fragments) != report.parse_ok)
        throw std::logic_error("fragment counts do not cover the parsed queries");
    std::uint64_t hist = 0;
    for (const auto& [k, v] : report.triple_histogram) hist += v;
    if (hist != report.parse_ok)
        throw std::logic_error("triple histogram does not cover the parsed queries");
    // every OPT-free query is monotonic, so the monotonic count dominates
    std::uint64_t opt_free = 0;
    for (const auto& [frag, n] : report.fragments)
        if (frag.find('O') == std::string::npos) opt_free += n;
    auto mono = report.mono_classes.find("Monotonic");
    std::uint64_t mono_count = mono == report.mono_classes.end() ? 0 : mono->second;
    if (mono_count < opt_free)
        throw std::logic_error("monotonic count fell below the OPT-free count");
}

// --- report output --------------------------------------------------------------------------

namespace {

std::string share_of(std::uint64_t part, std::uint64_t whole) {
    char buf[32];
    double pct = whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) /
                                        static_cast<double>(whole);
    std::snprintf(buf, sizeof(buf), "%.2f", pct);
    return buf;
}

json counts_with_share(const std::map<std::string, std::uint64_t>& m,
                       std::uint64_t whole) {
    json out = json::object();
    for (const auto& [k, v] : m)
        out[k] = {{"count", v}, {"share", share_of(v, whole)}};
    return out;
}

}  // namespace

std::string report_to_json(const CorpusReport& report) {
    json j;
    j["dedup"] = {{"total_texts", report.total_texts},
                  {"unique_queries", report.unique_queries}};
    j["parse"] = {{"ok", report.parse_ok},
                  {"errors", counts_with_share(report.parse_errors, report.unique_queries)}};
    json hist = json::array();
    for (const auto& [count, n] : report.triple_histogram)
        hist.push_back({{"triples", count},
                        {"queries", n},
                        {"share", share_of(n, report.parse_ok)}});
    j["triple_histogram"] = hist;
    j["fragments"] = counts_with_share(report.fragments, report.parse_ok);
    j["well_designed"] = {{"status", counts_with_share(report.wd_status, report.parse_ok)},
                          {"reasons", counts_with_share(report.wd_reasons, report.parse_ok)}};
    j["monotonicity"] = {{"classes", counts_with_share(report.mono_classes, report.parse_ok)},
                         {"rules", counts_with_share(report.mono_rules, report.parse_ok)}};
    j["satisfiability"] = {{"status", counts_with_share(report.sat_status, report.parse_ok)},
                           {"rules", counts_with_share(report.sat_rules, report.parse_ok)}};
    json disc = json::array();
    for (const auto& e : report.discrepancies) {
        disc.push_back({{"case", e.case_id},
                        {"published_label", e.published_label},
                        {"derived", e.derived},
                        {"witness", e.witness},
                        {"queries", e.queries}});
    }
    j["discrepancies"] = disc;
    return j.dump(2) + "\n";
}

std::string histogram_csv(const CorpusReport& report) {
    std::string out = "triples,queries,share\n";
    for (const auto& [count, n] : report.triple_histogram) {
        out += std::to_string(count) + "," + std::to_string(n) + "," +
               share_of(n, report.parse_ok) + "\n";
    }
    return out;
}

std::string fragments_csv(const CorpusReport& report) {
    std::string out = "fragment,queries,share\n";
    for (const auto& [frag, n] : report.fragments) {
        out += frag + "," + std::to_string(n) + "," + share_of(n, report.parse_ok) + "\n";
    }
    return out;
}

// --- pipeline ----------------------------------------------------------------------------------

std::vector<AnalysisRecord> analyze_corpus(const std::vector<RawQuery>& queries,
                                           const AnalysisOptions& opts, unsigned workers) {
    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    std::vector<AnalysisRecord> records(queries.size());
    if (workers == 1 || queries.size() < 2) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            records[i] = analyze_one(queries[i].text, opts);
            records[i].multiplicity = queries[i].multiplicity;
        }
        return records;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= queries.size()) return;
            records[i] = analyze_one(queries[i].text, opts);
            records[i].multiplicity = queries[i].multiplicity;
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return records;
}

}  // namespace sparqlstat
