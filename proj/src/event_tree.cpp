#include "turtleglyph/event_tree.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace turtleglyph {

bool is_valid_event_name(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '~';
  });
}

std::string path_display(const EventPath& path) {
  if (path.empty()) return "Ω";  // Ω
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '/';
    out += path[i];
  }
  return out;
}

Prob path_probability(const EventTree& tree, const EventPath& path) {
  Prob product = Prob::one();
  const std::vector<EventNode>* siblings = &tree.root_children;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const EventNode* match = nullptr;
    for (const EventNode& child : *siblings) {
      if (child.name == path[i]) {
        match = &child;
        break;
      }
    }
    if (!match) {
      EventPath prefix(path.begin(), path.begin() + static_cast<long>(i));
      throw UnknownPathError("unknown path segment '" + path[i] + "' under " +
                             path_display(prefix));
    }
    product *= match->cond_prob;
    siblings = &match->children;
  }
  return product;
}

namespace {

void collect_leaves(const std::vector<EventNode>& nodes, EventPath& prefix,
                    const Prob& mass, std::vector<LeafAtom>& out) {
  for (const EventNode& node : nodes) {
    prefix.push_back(node.name);
    Prob node_mass = mass * node.cond_prob;
    if (node.children.empty()) {
      out.push_back(LeafAtom{prefix, node_mass});
    } else {
      collect_leaves(node.children, prefix, node_mass, out);
    }
    prefix.pop_back();
  }
}

}  // namespace

std::vector<LeafAtom> leaves(const EventTree& tree) {
  std::vector<LeafAtom> out;
  EventPath prefix;
  collect_leaves(tree.root_children, prefix, Prob::one(), out);
  return out;
}

Partition level_partition(const EventTree& tree, int k) {
  Partition partition;
  partition.depth = k;
  if (k <= 0) {
    partition.depth = std::max(k, 0);
    partition.cells.push_back(PartitionCell{{}, Prob::one()});
    return partition;
  }

  std::function<void(const std::vector<EventNode>&, EventPath&, const Prob&, int)> walk =
      [&](const std::vector<EventNode>& nodes, EventPath& prefix, const Prob& mass,
          int depth) {
        for (const EventNode& node : nodes) {
          prefix.push_back(node.name);
          Prob node_mass = mass * node.cond_prob;
          if (depth == k || node.children.empty()) {
            partition.cells.push_back(PartitionCell{prefix, node_mass});
          } else {
            walk(node.children, prefix, node_mass, depth + 1);
          }
          prefix.pop_back();
        }
      };
  EventPath prefix;
  walk(tree.root_children, prefix, Prob::one(), 1);
  return partition;
}

namespace {

struct ValidationWalk {
  std::vector<Diagnostic>& out;
  bool structural_sums_ok = true;

  void check_children(const std::vector<EventNode>& children, const EventPath& parent,
                      int depth) {
    if (depth > kMaxDepth) {
      out.push_back({path_display(parent), "maximum depth " + std::to_string(kMaxDepth) +
                                               " exceeded"});
      return;  // do not recurse further into a runaway structure
    }

    std::set<EventName> seen;
    Prob sum = Prob::zero();
    for (const EventNode& child : children) {
      EventPath child_path = parent;
      child_path.push_back(child.name);
      if (!is_valid_event_name(child.name)) {
        out.push_back({path_display(child_path), "invalid event name '" + child.name + "'"});
      }
      if (!seen.insert(child.name).second) {
        out.push_back({path_display(parent), "duplicate sibling name '" + child.name + "'"});
      }
      if (!child.cond_prob.in_unit_interval()) {
        out.push_back({path_display(child_path), "probability out of range"});
        structural_sums_ok = false;
      }
      sum += child.cond_prob;
      check_children(child.children, child_path, depth + 1);
    }
    if (!children.empty() && !sum.is_one()) {
      out.push_back({path_display(parent),
                     "children sum " + sum.fraction_str() + " ≠ 1"});
      structural_sums_ok = false;
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const EventTree& tree) {
  std::vector<Diagnostic> out;
  if (tree.root_children.empty()) {
    out.push_back({path_display({}), "model has no events"});
    return out;
  }

  ValidationWalk walk{out};
  walk.check_children(tree.root_children, {}, 1);

  std::size_t n_leaves = leaf_count(tree);
  if (n_leaves > kMaxLeafCount) {
    out.push_back({path_display({}), "leaf count " + std::to_string(n_leaves) +
                                         " exceeds " + std::to_string(kMaxLeafCount)});
  }

  // Independent of the per-node sums above: re-derives the total mass from
  // the leaf atoms. Only meaningful once the structural sums hold, otherwise
  // it would duplicate a diagnostic already reported.
  if (walk.structural_sums_ok && out.empty()) {
    Prob total = Prob::zero();
    for (const LeafAtom& leaf : leaves(tree)) total += leaf.prob;
    if (!total.is_one()) {
      out.push_back({path_display({}),
                     "leaf probabilities sum " + total.fraction_str() + " ≠ 1"});
    }
  }
  return out;
}

namespace {

int depth_of(const std::vector<EventNode>& nodes) {
  int deepest = 0;
  for (const EventNode& node : nodes) deepest = std::max(deepest, 1 + depth_of(node.children));
  return deepest;
}

std::size_t count_leaves(const std::vector<EventNode>& nodes) {
  std::size_t n = 0;
  for (const EventNode& node : nodes)
    n += node.children.empty() ? 1 : count_leaves(node.children);
  return n;
}

}  // namespace

int max_depth(const EventTree& tree) { return depth_of(tree.root_children); }

std::size_t leaf_count(const EventTree& tree) {
  return tree.root_children.empty() ? 0 : count_leaves(tree.root_children);
}

const EventNode* find_node(const EventTree& tree, const EventPath& path) {
  const std::vector<EventNode>* siblings = &tree.root_children;
  const EventNode* current = nullptr;
  for (const EventName& segment : path) {
    current = nullptr;
    for (const EventNode& child : *siblings) {
      if (child.name == segment) {
        current = &child;
        break;
      }
    }
    if (!current) return nullptr;
    siblings = &current->children;
  }
  return current;
}

namespace {

bool short_name(const EventName& name) {
  if (name.size() == 1) return name[0] != '~';
  return name.size() == 2 && name[0] == '~';
}

bool all_short(const std::vector<EventNode>& nodes) {
  for (const EventNode& node : nodes) {
    if (!short_name(node.name)) return false;
    if (!all_short(node.children)) return false;
  }
  return true;
}

}  // namespace

bool all_names_short(const EventTree& tree) { return all_short(tree.root_children); }

std::string format_label(const EventPath& path, bool concatenated) {
  if (path.empty()) return "*";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i && !concatenated) out += '/';
    out += path[i];
  }
  return out;
}

}  // namespace turtleglyph
