#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "turtleglyph/errors.hpp"
#include "turtleglyph/prob.hpp"

namespace turtleglyph {

/// Token over [A-Za-z0-9_~]. A leading "~" is a naming convention for
/// complements ("~L") and carries no algebraic meaning here.
using EventName = std::string;
using EventPath = std::vector<EventName>;

bool is_valid_event_name(std::string_view token);

struct EventNode {
  EventName name;
  Prob cond_prob;  // edge weight: probability of this event given the path to its parent
  std::vector<EventNode> children;

  bool operator==(const EventNode&) const = default;
};

/// The sample space and its recursive partition. The root is the implicit
/// sample space with probability 1; immutable after construction.
struct EventTree {
  std::string title;
  std::vector<EventNode> root_children;
  std::map<std::string, std::string> metadata;

  bool operator==(const EventTree&) const = default;
};

/// A full root-to-leaf label with its path-product probability; the atoms of
/// the sample space.
struct LeafAtom {
  EventPath label;
  Prob prob;

  bool operator==(const LeafAtom&) const = default;
};

struct PartitionCell {
  EventPath prefix;  // empty prefix denotes the whole sample space
  Prob prob;

  bool operator==(const PartitionCell&) const = default;
};

struct Partition {
  int depth = 0;
  std::vector<PartitionCell> cells;

  bool operator==(const Partition&) const = default;
};

inline constexpr int kMaxDepth = 32;
inline constexpr std::size_t kMaxLeafCount = 100000;

/// "Ω" for the root, otherwise segments joined with "/".
std::string path_display(const EventPath& path);

/// Exact product of edge weights along `path`; the empty path yields 1.
/// Throws UnknownPathError if a segment is not a child of the previous node.
Prob path_probability(const EventTree& tree, const EventPath& path);

/// Depth-first pre-order leaf atoms; on a valid tree their probabilities sum
/// to exactly 1.
std::vector<LeafAtom> leaves(const EventTree& tree);

/// Cells are the distinct length-min(k, leaf depth) prefixes with their path
/// probabilities; leaves shorter than k stand as their own cells.
Partition level_partition(const EventTree& tree, int k);

/// Empty iff all model invariants hold. Diagnostics name the offending node
/// path and the violated invariant; they never throw.
std::vector<Diagnostic> validate(const EventTree& tree);

int max_depth(const EventTree& tree);
std::size_t leaf_count(const EventTree& tree);
const EventNode* find_node(const EventTree& tree, const EventPath& path);

/// True when every name in the model is one character after an optional
/// leading "~" ("L", "~L", "S" ...).
bool all_names_short(const EventTree& tree);

/// Join a label for display: concatenated ("~LS") in short-name style,
/// "/"-separated otherwise. The empty path renders as "*" (the root).
std::string format_label(const EventPath& path, bool concatenated);

}  // namespace turtleglyph
