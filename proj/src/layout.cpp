#include "turtleglyph/layout.hpp"

#include <cmath>
#include <numbers>

namespace turtleglyph {

namespace {

void assign_regions(const std::vector<EventNode>& nodes, EventPath& prefix,
                    const Prob& start, const Prob& span, int depth,
                    std::vector<RegionGeometry>& out) {
  if (depth > kMaxDepth)
    throw DepthExceededError("tree exceeds maximum depth " + std::to_string(kMaxDepth));
  Prob cursor = start;
  for (const EventNode& node : nodes) {
    prefix.push_back(node.name);
    Prob node_span = span * node.cond_prob;
    out.push_back(RegionGeometry{prefix, cursor, node_span, depth});
    if (!node.children.empty())
      assign_regions(node.children, prefix, cursor, node_span, depth + 1, out);
    cursor += node_span;
    prefix.pop_back();
  }
}

}  // namespace

TurtlebackLayout layout_turtleback(const EventTree& tree) {
  TurtlebackLayout layout;
  layout.regions.push_back(RegionGeometry{{}, Prob::zero(), Prob::one(), 0});
  EventPath prefix;
  assign_regions(tree.root_children, prefix, Prob::zero(), Prob::one(), 1, layout.regions);
  return layout;
}

namespace {

// θ − sin θ, with a series for small θ where the direct form cancels.
double segment_gauge(double theta) {
  if (theta < 0.5) {
    double t2 = theta * theta;
    // θ³/6 · (1 − θ²/20 (1 − θ²/42 (1 − θ²/72)))
    return theta * t2 / 6.0 *
           (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0 * (1.0 - t2 / 72.0)));
  }
  return theta - std::sin(theta);
}

}  // namespace

double solve_chord_angle(double p, double tol) {
  if (!(p > 0.0) || !(p < 1.0))
    throw DomainError("chord area fraction must lie strictly between 0 and 1");
  if (!(tol > 0.0)) throw DomainError("chord solver tolerance must be positive");

  constexpr double kTau = 2.0 * std::numbers::pi;
  const double target = kTau * p;

  // θ ↦ θ − sin θ is strictly increasing on (0, 2π); plain bisection.
  double lo = 0.0, hi = kTau;
  double mid = kTau * p;  // decent starting guess keeps the loop short
  for (int iter = 0; iter < 200; ++iter) {
    double residual = (segment_gauge(mid) - target) / kTau;
    if (std::fabs(residual) <= tol) return mid;
    if (residual < 0.0)
      lo = mid;
    else
      hi = mid;
    mid = 0.5 * (lo + hi);
  }
  return mid;
}

double solve_chord_angle(const Prob& p, double tol) {
  if (!p.in_unit_interval() || p.is_zero() || p.is_one())
    throw DomainError("chord area fraction must lie strictly between 0 and 1");
  return solve_chord_angle(p.to_double(), tol);
}

namespace {

struct TreeWalk {
  TreeLayout& layout;
  int next_leaf_x = 0;

  // Places every node in `nodes` and returns their mean x (the parent's x).
  double place(const std::vector<EventNode>& nodes, EventPath& prefix, int depth) {
    double sum = 0.0;
    for (const EventNode& node : nodes) {
      prefix.push_back(node.name);
      double x = node.children.empty() ? static_cast<double>(next_leaf_x++)
                                       : place(node.children, prefix, depth + 1);
      layout.positions[prefix] = Point{x, static_cast<double>(depth)};
      sum += x;
      prefix.pop_back();
    }
    return nodes.empty() ? 0.0 : sum / static_cast<double>(nodes.size());
  }

  void collect_edges(const std::vector<EventNode>& nodes, EventPath& prefix) {
    for (const EventNode& node : nodes) {
      EventPath parent = prefix;
      prefix.push_back(node.name);
      layout.edges.push_back(TreeEdge{parent, prefix, node.cond_prob});
      collect_edges(node.children, prefix);
      prefix.pop_back();
    }
  }
};

}  // namespace

TreeLayout layout_tree(const EventTree& tree) {
  if (max_depth(tree) > kMaxDepth)
    throw DepthExceededError("tree exceeds maximum depth " + std::to_string(kMaxDepth));
  TreeLayout layout;
  TreeWalk walk{layout};
  EventPath prefix;
  double root_x = walk.place(tree.root_children, prefix, 1);
  layout.positions[{}] = Point{root_x, 0.0};
  walk.collect_edges(tree.root_children, prefix);
  return layout;
}

}  // namespace turtleglyph
