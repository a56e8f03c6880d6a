#pragma once

#include <optional>
#include <string>
#include <vector>

#include "turtleglyph/event_tree.hpp"
#include "turtleglyph/textio.hpp"

namespace turtleglyph {

/// Warning attached when a pattern is longer than some leaf label: once a
/// branch has been truncated, positional complements past its end are not
/// representable, so the excluded leaves are surfaced instead of guessed at.
inline constexpr const char* kTruncationWarning =
    "truncated leaves excluded; complement queries at this position may be inexact";

struct QueryResult {
  Prob value;             // numerator_mass / denominator_mass, exact
  Prob numerator_mass;    // Σ prob over matched_leaves
  Prob denominator_mass;  // 1 for unconditional queries
  std::vector<LeafAtom> matched_leaves;
  std::optional<std::vector<LeafAtom>> condition_leaves;
  std::vector<std::string> warnings;
};

/// Prefix semantics: the label must be at least as long as the pattern and
/// agree with every non-wildcard segment; trailing label entries are free.
bool pattern_match(const LeafAtom& leaf, const Pattern& pattern);

/// Total probability of the leaf set selected by `pattern` (empty match
/// yields 0, never an error).
QueryResult event_probability(const EventTree& tree, const Pattern& pattern);

/// value = P(target ∧ condition) / P(condition), exact. Throws
/// ZeroConditionError when the condition mass is zero.
QueryResult conditional_probability(const EventTree& tree, const Pattern& target,
                                    const Pattern& condition);

/// Dispatches on whether the query carries a condition.
QueryResult evaluate(const EventTree& tree, const Query& query);

/// Worked solution as a teacher would write it: one line per matched atom
/// with its factorized path product, the total-probability sum, and the
/// final ratio for conditional queries.
struct ExplanationSteps {
  std::vector<std::string> steps;
  QueryResult result;
};

ExplanationSteps explain(const EventTree& tree, const Query& query);

/// Fixed JSON envelope:
/// {model, query, value:{num,den,decimal}, matched, condition_matched, warnings}
/// with `decimal` carrying 12 significant digits. Field names and order are
/// part of the interface.
std::string to_json_envelope(const std::string& model_title, const std::string& query_text,
                             const QueryResult& result, bool short_names);

}  // namespace turtleglyph
