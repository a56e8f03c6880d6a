#include "turtleglyph/engine.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

namespace turtleglyph {

bool pattern_match(const LeafAtom& leaf, const Pattern& pattern) {
  if (leaf.label.size() < pattern.segments.size()) return false;
  for (std::size_t i = 0; i < pattern.segments.size(); ++i) {
    const auto& segment = pattern.segments[i];
    if (segment && *segment != leaf.label[i]) return false;
  }
  return true;
}

namespace {

bool any_leaf_shorter(const std::vector<LeafAtom>& atoms, const Pattern& pattern) {
  return std::any_of(atoms.begin(), atoms.end(), [&](const LeafAtom& leaf) {
    return leaf.label.size() < pattern.segments.size();
  });
}

Prob mass_of(const std::vector<LeafAtom>& atoms) {
  Prob total = Prob::zero();
  for (const LeafAtom& leaf : atoms) total += leaf.prob;
  return total;
}

}  // namespace

QueryResult event_probability(const EventTree& tree, const Pattern& pattern) {
  QueryResult result;
  std::vector<LeafAtom> atoms = leaves(tree);
  for (const LeafAtom& leaf : atoms)
    if (pattern_match(leaf, pattern)) result.matched_leaves.push_back(leaf);

  result.numerator_mass = mass_of(result.matched_leaves);
  result.denominator_mass = Prob::one();
  result.value = result.numerator_mass;
  if (any_leaf_shorter(atoms, pattern)) result.warnings.push_back(kTruncationWarning);
  return result;
}

QueryResult conditional_probability(const EventTree& tree, const Pattern& target,
                                    const Pattern& condition) {
  QueryResult result;
  std::vector<LeafAtom> atoms = leaves(tree);
  std::vector<LeafAtom> condition_atoms;
  for (const LeafAtom& leaf : atoms) {
    bool in_condition = pattern_match(leaf, condition);
    if (in_condition) condition_atoms.push_back(leaf);
    if (in_condition && pattern_match(leaf, target)) result.matched_leaves.push_back(leaf);
  }

  result.numerator_mass = mass_of(result.matched_leaves);
  result.denominator_mass = mass_of(condition_atoms);
  result.condition_leaves = std::move(condition_atoms);
  if (result.denominator_mass.is_zero())
    throw ZeroConditionError("condition '" + condition.to_string() +
                             "' has probability zero; the conditional is undefined");
  result.value = result.numerator_mass / result.denominator_mass;
  if (any_leaf_shorter(atoms, target) || any_leaf_shorter(atoms, condition))
    result.warnings.push_back(kTruncationWarning);
  return result;
}

QueryResult evaluate(const EventTree& tree, const Query& query) {
  if (query.condition) return conditional_probability(tree, query.target, *query.condition);
  return event_probability(tree, query.target);
}

namespace {

// "LS: 3/50·23/25" — the factors are the edge weights along the label.
std::string product_line(const EventTree& tree, const LeafAtom& leaf, bool short_names) {
  std::string line = format_label(leaf.label, short_names) + ": ";
  const std::vector<EventNode>* siblings = &tree.root_children;
  for (std::size_t i = 0; i < leaf.label.size(); ++i) {
    const EventNode* node = nullptr;
    for (const EventNode& child : *siblings) {
      if (child.name == leaf.label[i]) {
        node = &child;
        break;
      }
    }
    if (i) line += "·";
    line += node->cond_prob.fraction_str();
    siblings = &node->children;
  }
  if (leaf.label.size() > 1) line += " = " + leaf.prob.fraction_str();
  return line;
}

std::string sum_line(const std::string& query_text, const QueryResult& result) {
  std::string line = query_text + " = ";
  for (std::size_t i = 0; i < result.matched_leaves.size(); ++i) {
    if (i) line += " + ";
    line += result.matched_leaves[i].prob.fraction_str();
  }
  if (result.matched_leaves.size() > 1)
    line += " = " + result.numerator_mass.fraction_str();
  line += " ≈ " + result.numerator_mass.decimal_str(6);
  return line;
}

}  // namespace

ExplanationSteps explain(const EventTree& tree, const Query& query) {
  ExplanationSteps out;
  out.result = evaluate(tree, query);
  bool short_names = all_names_short(tree);

  if (out.result.matched_leaves.empty()) {
    out.steps.push_back("no atoms match; probability 0");
    return out;
  }

  out.steps.push_back("atoms matching " + query.target.to_string() +
                      (query.condition ? " within " + query.condition->to_string() : "") + ":");
  for (const LeafAtom& leaf : out.result.matched_leaves)
    out.steps.push_back("  " + product_line(tree, leaf, short_names));

  QueryResult numerator_view;
  numerator_view.matched_leaves = out.result.matched_leaves;
  numerator_view.numerator_mass = out.result.numerator_mass;
  out.steps.push_back(sum_line("P(" + query.target.to_string() +
                                   (query.condition ? " ∧ " + query.condition->to_string()
                                                    : "") +
                                   ")",
                               numerator_view));

  if (query.condition) {
    out.steps.push_back("atoms matching condition " + query.condition->to_string() + ":");
    for (const LeafAtom& leaf : *out.result.condition_leaves)
      out.steps.push_back("  " + product_line(tree, leaf, short_names));

    QueryResult condition_view;
    condition_view.matched_leaves = *out.result.condition_leaves;
    condition_view.numerator_mass = out.result.denominator_mass;
    out.steps.push_back(sum_line("P(" + query.condition->to_string() + ")", condition_view));

    out.steps.push_back(query.to_string() + " = (" + out.result.numerator_mass.fraction_str() +
                        ")/(" + out.result.denominator_mass.fraction_str() + ") = " +
                        out.result.value.fraction_str() + " ≈ " +
                        out.result.value.decimal_str(6));
  }
  return out;
}

std::string to_json_envelope(const std::string& model_title, const std::string& query_text,
                             const QueryResult& result, bool short_names) {
  nlohmann::ordered_json doc;
  doc["model"] = model_title;
  doc["query"] = query_text;
  doc["value"] = {{"num", result.value.numerator().str()},
                  {"den", result.value.denominator().str()},
                  {"decimal", result.value.decimal_str(12)}};
  auto labels = nlohmann::ordered_json::array();
  for (const LeafAtom& leaf : result.matched_leaves)
    labels.push_back(format_label(leaf.label, short_names));
  doc["matched"] = std::move(labels);
  auto condition_labels = nlohmann::ordered_json::array();
  if (result.condition_leaves)
    for (const LeafAtom& leaf : *result.condition_leaves)
      condition_labels.push_back(format_label(leaf.label, short_names));
  doc["condition_matched"] = std::move(condition_labels);
  doc["warnings"] = result.warnings;
  return doc.dump();
}

}  // namespace turtleglyph
