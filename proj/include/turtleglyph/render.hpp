#pragma once

#include <string>
#include <vector>

#include "turtleglyph/layout.hpp"

namespace turtleglyph {

enum class LabelMode { kConcatenated, kSlashSeparated, kAuto };

struct Style {
  int canvas_size = 600;   // pixels; must be >= 100
  double font_size = 14.0;
  std::vector<std::string> palette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                      "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                      "#9c755f", "#bab0ac"};
  std::vector<double> stroke_width_by_depth = {3.0, 2.0, 1.2, 0.8, 0.5};
  LabelMode label_mode = LabelMode::kAuto;
};

/// Sector (pie-wedge) turtleback: one filled path per leaf, radial boundary
/// strokes per depth (deeper = thinner), leaf labels like "LS 5.52%" at the
/// sector mid-angle at 2/3 radius. Labels spanning under 0.5° move to a
/// legend. Output is byte-deterministic for identical inputs; labels too wide
/// for their sector add a warning but still render.
std::string render_turtleback(const TurtlebackLayout& layout, const Style& style,
                              std::vector<std::string>* warnings = nullptr);

/// Straight-line variant for a two-child root: every cut is a full chord of
/// the disk placed by solve_chord_angle at the cumulative leaf mass, so each
/// region is a slab between parallel chords with exact area. Throws
/// DomainError when the root does not have exactly two children.
std::string render_turtleback_chord(const TurtlebackLayout& layout, const Style& style,
                                    std::vector<std::string>* warnings = nullptr);

/// Node-and-edge diagram: circles for nodes (root labeled "*"), straight
/// edges with percentage weights at their midpoints.
std::string render_tree(const TreeLayout& layout, const Style& style);

/// Shortest round-trip decimal form of a double ("0.0552", "300").
std::string format_double(double value);

}  // namespace turtleglyph
