#pragma once

#include <optional>
#include <string>
#include <vector>

#include "turtleglyph/event_tree.hpp"

namespace turtleglyph {

/// Positional event pattern; a disengaged segment is the wildcard "*".
/// Matching is prefix semantics: leaves shorter than the pattern never match.
struct Pattern {
  std::vector<std::optional<EventName>> segments;

  bool operator==(const Pattern&) const = default;
  std::string to_string() const;  // "L/S", "*/S"
};

struct Query {
  Pattern target;
  std::optional<Pattern> condition;
  std::string text;  // original source form, kept for reports and JSON

  std::string to_string() const;  // normalized "P(L/S | */S)"
};

/// Parse the .tb model grammar:
///
///   file    := header node*
///   header  := 'model' STRING NEWLINE
///   node    := INDENT* name ':' prob NEWLINE node*
///   name    := [A-Za-z0-9_~]+
///   prob    := DECIMAL (0.92) | FRACTION (3/5) | PERCENT (92%)
///
/// Children sit exactly two spaces deeper than their parent; tabs are a
/// syntax error. '#' starts a comment; blank lines are ignored.
///
/// Throws SyntaxError with position, or ValidationError forwarding the
/// model diagnostics. The returned tree always satisfies validate().
EventTree parse_model(const std::string& source);

/// Grammar: 'P(' pattern (' | ' pattern)? ')'; pattern := seg ('/' seg)*;
/// seg := name | '*'. Throws SyntaxError with position.
Query parse_query(const std::string& text);

/// Canonical form: two-space indents, probabilities as lowest-terms
/// fractions ("23/25"), children in stored order. parse ∘ serialize is the
/// identity on valid trees.
std::string serialize_model(const EventTree& tree);

}  // namespace turtleglyph
