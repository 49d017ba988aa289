#pragma once

#include <optional>

#include "sparqlstat/normal_forms.hpp"
#include "sparqlstat/oracle.hpp"

namespace sparqlstat {

enum class MonoClass { Monotonic, WeaklyMonotonic, NonMonotonic, Unknown };

enum class MonoRule {
    OptFree,
    OptMonotonic,
    AllBranchesWellDesigned,
    ExceptionTemplate,
    OracleCounterexample,
    UnsafeDefault,
    None,  // Unknown verdicts
};

/// Known exception shapes, generalized over renaming and union arity.
enum class TemplateId {
    T1_OptOverUnion,        // OPT over UNION, both sides plain-monotonic parts
    T2_OptOverUnionReuse,   // a union branch reuses an optionally bound variable
    T3_LangMatchesFilter,   // langMatches filter on an OPT-introduced variable
    T4_NegatedBoundFilter,  // negated bound() on an OPT-introduced variable
    T5_NestedOptReuse,      // outer OPT right side reuses an inner OPT variable
};

const char* to_string(MonoClass c);
const char* to_string(MonoRule r);
const char* to_string(TemplateId t);

struct MonotonicityVerdict {
    MonoClass cls = MonoClass::Unknown;
    MonoRule rule = MonoRule::None;
    std::optional<TemplateId> template_id;
    /// Replayable weak-monotonicity violation; present on every NonMonotonic.
    std::optional<MonoCounterexample> evidence;
    /// For WeaklyMonotonic verdicts under the oracle: a plain-monotonicity
    /// violation separating the class from Monotonic.
    std::optional<MonoCounterexample> plain_evidence;
};

struct MonoOptions {
    bool use_oracle = false;  // step D search and weak/plain evidence hunting
    OracleBudget budget;
};

std::optional<TemplateId> match_exception_template(const Pattern& p);

/// GRAPH wrappers replaced by their operand, recursively.
PatternPtr strip_graph(const Pattern& p);

MonotonicityVerdict classify_monotonicity(const Query& q, const MonoOptions& opts = {});
MonotonicityVerdict classify_monotonicity_pattern(const Pattern& body,
                                                  const MonoOptions& opts = {});

}  // namespace sparqlstat
