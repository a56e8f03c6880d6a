#pragma once

#include <map>
#include <utility>
#include <vector>

#include "turtleglyph/event_tree.hpp"

namespace turtleglyph {

/// Angular interval assigned to one node's region of the disk. Angles are
/// exact fractions of a full turn; radians appear only at render time.
struct RegionGeometry {
  EventPath node_path;
  Prob angle_start;
  Prob angle_span;  // equals path_probability(node_path) exactly
  int depth = 0;
};

struct TurtlebackLayout {
  std::vector<RegionGeometry> regions;  // pre-order, root region first
  double radius = 1.0;                  // render-time scale only
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

struct TreeEdge {
  EventPath parent;
  EventPath child;
  Prob weight;
};

struct TreeLayout {
  std::map<EventPath, Point> positions;  // abstract layout units
  std::vector<TreeEdge> edges;           // pre-order
};

/// Depth-first assignment: the root takes [0,1) of the full turn and each
/// node's interval is subdivided among its children proportionally to their
/// edge weights, in child order, exactly. Every node gets a region.
/// Throws DepthExceededError beyond kMaxDepth.
TurtlebackLayout layout_turtleback(const EventTree& tree);

/// Central angle θ ∈ (0, 2π) whose circular segment covers area fraction p
/// of the disk: solves (θ − sin θ)/(2π) = p by bisection to |residual| ≤ tol.
/// Throws DomainError for p outside (0,1).
double solve_chord_angle(const Prob& p, double tol);
double solve_chord_angle(double p, double tol);

/// Layered placement: depth = layer, leaves evenly spaced at unit intervals
/// in leaf order, each internal node at the mean x of its children.
TreeLayout layout_tree(const EventTree& tree);

}  // namespace turtleglyph
